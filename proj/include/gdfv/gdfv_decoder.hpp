#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gdfv/decode.hpp"
#include "gdfv/dominance_table.hpp"
#include "gdfv/dominance_tree.hpp"
#include "gdfv/hmm.hpp"
#include "gdfv/maxplus.hpp"
#include "gdfv/spliced_multiplier.hpp"

namespace gdfv {

/// Block width used to splice the n x n log-transition matrix:
/// max(1, floor(alpha * log2 n)).
inline std::size_t gdfv_block_width(std::size_t n, double alpha) {
    const double t = std::floor(alpha * std::log2(static_cast<double>(n)));
    return t < 1.0 ? 1 : static_cast<std::size_t>(t);
}

/// MAPD decoder that replaces the Viterbi inner loop with online
/// (max,+)-multiplications against a preprocessed multiplier over the
/// transposed log-transition matrix (entry [s,s'] = log t_{s'}(s), zero
/// probabilities mapping to -inf). One multiplication per observation step
/// yields the next trellis column and its predecessors in one sweep.
///
/// Immutable after construction; concurrent decodes of distinct observation
/// sequences are safe.
template <DominanceBackend Backend>
class GdfvDecoder {
  public:
    GdfvDecoder(const HiddenMarkovModel& model, std::size_t block_width,
                std::uint64_t budget_bytes = SplicedMultiplier<Backend>::kDefaultBudgetBytes)
        : states_(model.state_count()),
          symbols_(model.symbol_count()),
          log_pi_(detail::log_initial(model)),
          log_e_(detail::log_emission(model)),
          multiplier_(make_multiplier(model, block_width, budget_bytes)) {}

    std::size_t block_width() const noexcept { return multiplier_.block_width(); }
    std::size_t block_count() const noexcept { return multiplier_.block_count(); }
    std::uint64_t memory_bytes() const noexcept { return multiplier_.memory_bytes(); }

    std::pair<DecodeResult, Trellis> decode(std::span<const std::int32_t> obs,
                                            MulStats* stats = nullptr) const {
        for (const std::int32_t a : obs)
            if (a < 0 || static_cast<std::size_t>(a) >= symbols_)
                throw std::invalid_argument("decode: symbol id out of range");
        if (obs.empty()) throw std::invalid_argument("decode: empty observation sequence");

        const std::size_t n = states_;
        const std::size_t m = obs.size();
        const auto last_state = static_cast<std::int32_t>(n - 1);

        Trellis trellis;
        trellis.steps = m;
        trellis.states = n;
        trellis.log_q.resize(m * n);
        trellis.pred.assign(m * n, 0);
        for (std::size_t s = 0; s < n; ++s) trellis.log_q[s] = log_pi_[s];

        std::vector<ExtendedValue> u(n);
        MulResult step;
        for (std::size_t i = 1; i < m; ++i) {
            const std::int32_t a = obs[i - 1];
            const ExtendedValue* qprev = trellis.log_q.data() + (i - 1) * n;
            for (std::size_t sp = 0; sp < n; ++sp) u[sp] = qprev[sp] + log_e_[sp * symbols_ + a];

            multiplier_.multiply(u, step, stats);

            ExtendedValue* qcur = trellis.log_q.data() + i * n;
            std::int32_t* pred = trellis.pred.data() + i * n;
            for (std::size_t s = 0; s < n; ++s) {
                qcur[s] = step.values[s];
                // Padding columns only win on all -inf rows; clamp so the
                // stored predecessor is always a real state.
                pred[s] = std::min(step.argmax_cols[s] - 1, last_state);
            }
        }

        detail::finalize_trellis(trellis, log_e_, symbols_, obs[m - 1]);
        DecodeResult result{backtrack(trellis), trellis.log_joint};
        return {std::move(result), std::move(trellis)};
    }

  private:
    static SplicedMultiplier<Backend> make_multiplier(const HiddenMarkovModel& model,
                                                      std::size_t block_width,
                                                      std::uint64_t budget_bytes) {
        const std::size_t n = model.state_count();
        const auto log_tt = detail::log_transition_transposed(model);
        MaxPlusMatrix mat(n, n);
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t sp = 0; sp < n; ++sp) mat.at(s, sp) = log_tt[s * n + sp];
        return SplicedMultiplier<Backend>(mat, block_width, budget_bytes);
    }

    std::size_t states_, symbols_;
    std::vector<ExtendedValue> log_pi_, log_e_;
    SplicedMultiplier<Backend> multiplier_;
};

using GdfvTreeDecoder = GdfvDecoder<DominanceTree<Triple>>;
using GdfvTableDecoder = GdfvDecoder<DominanceTable<Triple>>;

/// Tree-backed decoder with the block width derived from alpha in (0, 1/2).
inline GdfvTreeDecoder gdfv_preprocess(
    const HiddenMarkovModel& model, double alpha = 0.25,
    std::uint64_t budget_bytes = SplicedMultiplier<DominanceTree<Triple>>::kDefaultBudgetBytes) {
    if (model.state_count() < 2)
        throw std::invalid_argument("gdfv_preprocess: need at least 2 states");
    if (!(alpha > 0.0 && alpha < 0.5))
        throw std::invalid_argument("gdfv_preprocess: alpha must lie in (0, 0.5)");
    return GdfvTreeDecoder(model, gdfv_block_width(model.state_count(), alpha), budget_bytes);
}

inline std::pair<DecodeResult, Trellis> gdfv_decode(const GdfvTreeDecoder& decoder,
                                                    std::span<const std::int32_t> obs,
                                                    MulStats* stats = nullptr) {
    return decoder.decode(obs, stats);
}

/// Table-backed decoding for desk-scale models: same contract as the tree
/// route but each pivot uses the exponential lookup table.
inline DecodeResult gdfv_table_decode(
    const HiddenMarkovModel& model, std::span<const std::int32_t> obs, std::size_t block_width,
    std::uint64_t budget_bytes =
        SplicedMultiplier<DominanceTable<Triple>>::kDefaultBudgetBytes) {
    GdfvTableDecoder decoder(model, block_width, budget_bytes);
    return decoder.decode(obs).first;
}

}  // namespace gdfv
