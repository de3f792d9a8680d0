#pragma once

// Umbrella header.

#include "gdfv/bench.hpp"
#include "gdfv/block_multiplier.hpp"
#include "gdfv/decode.hpp"
#include "gdfv/dominance_table.hpp"
#include "gdfv/dominance_tree.hpp"
#include "gdfv/errors.hpp"
#include "gdfv/extended_value.hpp"
#include "gdfv/gdfv_decoder.hpp"
#include "gdfv/hmm.hpp"
#include "gdfv/maxplus.hpp"
#include "gdfv/point_set.hpp"
#include "gdfv/random_gen.hpp"
#include "gdfv/spliced_multiplier.hpp"
#include "gdfv/text_io.hpp"
#include "gdfv/triple.hpp"
