#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "gdfv/bench.hpp"
#include "gdfv/decode.hpp"
#include "gdfv/gdfv_decoder.hpp"
#include "gdfv/hmm.hpp"
#include "gdfv/random_gen.hpp"

using gdfv::DecodeResult;
using gdfv::ExtendedValue;
using gdfv::HiddenMarkovModel;
using gdfv::Trellis;

namespace {

using Path = std::vector<std::int32_t>;
using Obs = std::vector<std::int32_t>;

// Two states over {a, b}: a sticky model that prefers emitting its own symbol.
HiddenMarkovModel two_state_model() {
    HiddenMarkovModel m;
    m.alphabet = {"a", "b"};
    m.initial = {0.5, 0.5};
    m.transition = {0.9, 0.1, 0.2, 0.8};
    m.emission = {0.9, 0.1, 0.1, 0.9};
    return m;
}

bool close(ExtendedValue a, ExtendedValue b) { return gdfv::values_agree(a, b); }

// Best probability over all length-i prefixes ending in `state`, evaluated
// directly from the joint-probability formula (the first i-1 symbols are
// consumed, each emitted by the state the step left).
ExtendedValue prefix_oracle(const HiddenMarkovModel& model, const Obs& obs,
                            std::size_t steps, std::int32_t state) {
    const std::size_t n = model.state_count();
    const std::size_t k = model.symbol_count();
    ExtendedValue best = ExtendedValue::neg_infinity();
    Path prefix(steps, 0);
    prefix.back() = state;
    while (true) {
        ExtendedValue p = ExtendedValue::log_prob(model.initial[prefix[0]]);
        for (std::size_t i = 0; i + 1 < steps; ++i) {
            p += ExtendedValue::log_prob(model.transition[prefix[i] * n + prefix[i + 1]]);
            p += ExtendedValue::log_prob(model.emission[prefix[i] * k + obs[i]]);
        }
        if (p > best) best = p;
        std::size_t pos = 0;
        while (pos + 1 < steps) {
            if (++prefix[pos] < static_cast<std::int32_t>(n)) break;
            prefix[pos] = 0;
            ++pos;
        }
        if (pos + 1 >= steps) break;
    }
    return best;
}

}  // namespace

TEST_CASE("joint log probability", "[hmm]") {
    const auto model = two_state_model();

    SECTION("single step has no transition factor") {
        const ExtendedValue got = joint_log_prob(model, Path{0}, Obs{0});
        CHECK(close(got, ExtendedValue::finite(std::log(0.5 * 0.9))));
    }

    SECTION("the four-step reference value") {
        const ExtendedValue got = joint_log_prob(model, Path{0, 0, 1, 1}, Obs{0, 0, 1, 1});
        const double want = std::log(0.5 * 0.9 * 0.1 * 0.8 * 0.9 * 0.9 * 0.9 * 0.9);
        CHECK(close(got, ExtendedValue::finite(want)));
    }

    SECTION("zero-probability transitions collapse to -inf") {
        HiddenMarkovModel m = two_state_model();
        m.transition = {1.0, 0.0, 0.2, 0.8};
        CHECK(joint_log_prob(m, Path{0, 1}, Obs{0, 0}).is_neg_infinity());
    }

    SECTION("rejects invalid states and symbols") {
        CHECK_THROWS_AS(joint_log_prob(model, Path{0, 5}, Obs{0, 0}),
                        std::invalid_argument);
        CHECK_THROWS_AS(joint_log_prob(model, Path{0, 0}, Obs{0, 9}),
                        std::invalid_argument);
        CHECK_THROWS_AS(joint_log_prob(model, Path{}, Obs{}), std::invalid_argument);
    }
}

TEST_CASE("brute force decoding on the reference example", "[hmm]") {
    const auto model = two_state_model();
    const Obs obs{0, 0, 1, 1};
    const auto result = gdfv::brute_force_decode(model, obs);
    CHECK(result.path == Path{0, 0, 1, 1});
    CHECK(close(result.log_joint_prob,
                joint_log_prob(model, result.path, obs)));
}

TEST_CASE("viterbi baseline on the reference example", "[hmm]") {
    const auto model = two_state_model();
    const Obs obs{0, 0, 1, 1};
    const auto [result, trellis] = gdfv::viterbi_baseline(model, obs);
    CHECK(result.path == Path{0, 0, 1, 1});
    CHECK(close(result.log_joint_prob, gdfv::brute_force_decode(model, obs).log_joint_prob));
    CHECK(gdfv::backtrack(trellis) == result.path);
    // log q_1(s) = log pi_s
    CHECK(trellis.q(0, 0) == ExtendedValue::log_prob(0.5));
    CHECK(trellis.q(0, 1) == ExtendedValue::log_prob(0.5));
}

TEST_CASE("single observation decoding", "[hmm]") {
    const auto model = two_state_model();
    const auto [result, trellis] = gdfv::viterbi_baseline(model, Obs{1});
    CHECK(result.path == Path{1});  // 0.5 * 0.9 via state 2
    CHECK(close(result.log_joint_prob, ExtendedValue::finite(std::log(0.5 * 0.9))));
    CHECK(trellis.steps == 1);
    CHECK(gdfv::backtrack(trellis) == result.path);
}

TEST_CASE("deterministic model has a forced path", "[hmm]") {
    HiddenMarkovModel m;
    m.alphabet = {"x", "y", "z"};
    m.initial = {1.0, 0.0, 0.0};
    // permutation 1 -> 2 -> 3 -> 1, each state emits its own symbol
    m.transition = {0, 1, 0, 0, 0, 1, 1, 0, 0};
    m.emission = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    const Obs obs{0, 1, 2, 0, 1};
    const auto [result, trellis] = gdfv::viterbi_baseline(m, obs);
    CHECK(result.path == Path{0, 1, 2, 0, 1});
    CHECK(close(result.log_joint_prob, ExtendedValue::finite(0.0)));
    CHECK(gdfv::brute_force_decode(m, obs).path == result.path);
}

TEST_CASE("empty observation sequences are rejected", "[hmm]") {
    const auto model = two_state_model();
    CHECK_THROWS_AS(gdfv::viterbi_baseline(model, Obs{}), std::invalid_argument);
    CHECK_THROWS_AS(gdfv::brute_force_decode(model, Obs{}), std::invalid_argument);
    const auto decoder = gdfv::gdfv_preprocess(model);
    CHECK_THROWS_AS(decoder.decode(Obs{}), std::invalid_argument);
}

TEST_CASE("block width rule", "[hmm]") {
    CHECK(gdfv::gdfv_block_width(16, 0.25) == 1);
    CHECK(gdfv::gdfv_block_width(4096, 0.25) == 3);
    CHECK(gdfv::gdfv_block_width(2, 0.25) == 1);
    CHECK(gdfv::gdfv_block_width(256, 0.49) == 3);
}

TEST_CASE("gdfv_preprocess validates its inputs", "[hmm]") {
    const auto model = two_state_model();
    CHECK_THROWS_AS(gdfv::gdfv_preprocess(model, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gdfv::gdfv_preprocess(model, 0.5), std::invalid_argument);
    HiddenMarkovModel tiny;
    tiny.alphabet = {"a"};
    tiny.initial = {1.0};
    tiny.transition = {1.0};
    tiny.emission = {1.0};
    CHECK_THROWS_AS(gdfv::gdfv_preprocess(tiny), std::invalid_argument);
}

TEST_CASE("gdfv decoding matches the baseline on the reference example", "[hmm]") {
    const auto model = two_state_model();
    const Obs obs{0, 0, 1, 1};
    const auto decoder = gdfv::gdfv_preprocess(model);
    const auto [result, trellis] = gdfv::gdfv_decode(decoder, obs);
    CHECK(result.path == Path{0, 0, 1, 1});
    const auto [base, base_trellis] = gdfv::viterbi_baseline(model, obs);
    CHECK(close(result.log_joint_prob, base.log_joint_prob));
    CHECK(gdfv::backtrack(trellis) == base.path);
    // m = 1 needs no multiplications at all
    const auto [single, strellis] = decoder.decode(Obs{1});
    CHECK(single.path == gdfv::viterbi_baseline(model, Obs{1}).first.path);
}

TEST_CASE("decoders agree with brute force on small random models", "[hmm]") {
    for (int iter = 0; iter < 60; ++iter) {
        const std::uint64_t seed = gdfv::derive_seed(0xD0DECu, iter);
        gdfv::Rng dims(seed);
        const std::size_t n = 2 + dims.below(4);        // 2..5
        const std::size_t k = 2 + dims.below(3);        // 2..4
        const std::size_t m = 1 + dims.below(8);        // 1..8
        const auto model = gdfv::gen_random_model(n, k, gdfv::derive_seed(seed, 1));
        const auto obs = gdfv::gen_random_observations(m, k, gdfv::derive_seed(seed, 2));

        const auto brute = gdfv::brute_force_decode(model, obs);
        const auto base = gdfv::viterbi_baseline(model, obs).first;
        const auto decoder = gdfv::gdfv_preprocess(model);
        const auto fast = decoder.decode(obs).first;

        CHECK(base.path == brute.path);
        CHECK(fast.path == brute.path);
        CHECK(close(base.log_joint_prob, brute.log_joint_prob));
        CHECK(close(fast.log_joint_prob, brute.log_joint_prob));
        CHECK(close(joint_log_prob(model, fast.path, obs), fast.log_joint_prob));
    }
}

TEST_CASE("sparse models with zero transitions decode identically", "[hmm]") {
    for (int iter = 0; iter < 25; ++iter) {
        const std::uint64_t seed = gdfv::derive_seed(0x5EEDu, iter);
        gdfv::Rng rng(seed);
        const std::size_t n = 4 + rng.below(12);
        auto model = gdfv::gen_random_model(n, 3, gdfv::derive_seed(seed, 1));
        // zero out a third of the transition entries, then renormalize
        for (auto& p : model.transition)
            if (rng.below(3) == 0) p = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            double sum = 0;
            for (std::size_t j = 0; j < n; ++j) sum += model.transition[s * n + j];
            if (sum == 0.0) model.transition[s * n + s] = sum = 1.0;
            for (std::size_t j = 0; j < n; ++j) model.transition[s * n + j] /= sum;
        }
        gdfv::validate_model(model);

        const auto obs = gdfv::gen_random_observations(40, 3, gdfv::derive_seed(seed, 2));
        const auto base = gdfv::viterbi_baseline(model, obs).first;
        const auto fast = gdfv::gdfv_preprocess(model, 0.3).decode(obs).first;
        CHECK(close(base.log_joint_prob, fast.log_joint_prob));
        CHECK(base.path == fast.path);
    }
}

TEST_CASE("table-backed decoding agrees with the baseline", "[hmm]") {
    SECTION("n = 8, width 2") {
        const auto model = gdfv::gen_random_model(8, 3, 404);
        const auto obs = gdfv::gen_random_observations(30, 3, 405);
        const auto base = gdfv::viterbi_baseline(model, obs).first;
        const auto got = gdfv::gdfv_table_decode(model, obs, 2);
        CHECK(got.path == base.path);
        CHECK(close(got.log_joint_prob, base.log_joint_prob));
    }
    SECTION("single block: width = n") {
        const auto model = gdfv::gen_random_model(4, 2, 406);
        const auto obs = gdfv::gen_random_observations(12, 2, 407);
        const auto base = gdfv::viterbi_baseline(model, obs).first;
        const auto got = gdfv::gdfv_table_decode(model, obs, 4);
        CHECK(got.path == base.path);
        CHECK(close(got.log_joint_prob, base.log_joint_prob));
    }
    SECTION("degenerate width 1 on a 2-state model") {
        const auto model = two_state_model();
        const Obs obs{0, 1, 1, 0};
        const auto base = gdfv::viterbi_baseline(model, obs).first;
        const auto got = gdfv::gdfv_table_decode(model, obs, 1);
        CHECK(got.path == base.path);
        CHECK(close(got.log_joint_prob, base.log_joint_prob));
    }
}

TEST_CASE("all three decoders pick the same path under exact ties", "[hmm]") {
    // joint(1,2) == joint(2,1) exactly (identical float terms in identical
    // order); the backward-greedy largest-index rule must pick (1,2): the
    // larger final state first, then its predecessor.
    HiddenMarkovModel m;
    m.alphabet = {"a", "b"};
    m.initial = {0.5, 0.5};
    m.transition = {0.25, 0.75, 0.75, 0.25};
    m.emission = {0.5, 0.5, 0.5, 0.5};
    const Obs obs{0, 0};

    const auto brute = gdfv::brute_force_decode(m, obs);
    const auto base = gdfv::viterbi_baseline(m, obs).first;
    const auto fast = gdfv::gdfv_preprocess(m).decode(obs).first;
    const auto table = gdfv::gdfv_table_decode(m, obs, 1);

    CHECK(brute.path == Path{0, 1});
    CHECK(base.path == Path{0, 1});
    CHECK(fast.path == Path{0, 1});
    CHECK(table.path == Path{0, 1});
}

TEST_CASE("uniform model: every path ties, all decoders pick the largest", "[hmm]") {
    HiddenMarkovModel m;
    m.alphabet = {"a", "b"};
    m.initial = {0.5, 0.5};
    m.transition = {0.5, 0.5, 0.5, 0.5};
    m.emission = {0.5, 0.5, 0.5, 0.5};
    const Obs obs{0, 1, 0};
    const Path want{1, 1, 1};
    CHECK(gdfv::brute_force_decode(m, obs).path == want);
    CHECK(gdfv::viterbi_baseline(m, obs).first.path == want);
    CHECK(gdfv::gdfv_preprocess(m).decode(obs).first.path == want);
}

TEST_CASE("trellis values match the prefix oracle", "[hmm]") {
    for (int iter = 0; iter < 10; ++iter) {
        const std::uint64_t seed = gdfv::derive_seed(0x7E1115u, iter);
        gdfv::Rng rng(seed);
        const std::size_t n = 2 + rng.below(3);  // 2..4
        const std::size_t m = 2 + rng.below(5);  // 2..6
        const auto model = gdfv::gen_random_model(n, 2, gdfv::derive_seed(seed, 1));
        const Obs obs = gdfv::gen_random_observations(m, 2, gdfv::derive_seed(seed, 2));
        const auto [result, trellis] = gdfv::viterbi_baseline(model, obs);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t s = 0; s < n; ++s)
                CHECK(close(trellis.q(i, s),
                            prefix_oracle(model, obs, i + 1, static_cast<std::int32_t>(s))));
    }
}

TEST_CASE("best trellis score degrades monotonically", "[hmm]") {
    const auto model = gdfv::gen_random_model(12, 4, 31337);
    const auto obs = gdfv::gen_random_observations(60, 4, 31338);
    const auto [result, trellis] = gdfv::viterbi_baseline(model, obs);
    ExtendedValue prev_best = ExtendedValue::neg_infinity();
    for (std::size_t i = 0; i < trellis.steps; ++i) {
        ExtendedValue best = ExtendedValue::neg_infinity();
        for (std::size_t s = 0; s < trellis.states; ++s)
            best = std::max(best, trellis.q(i, s));
        if (i > 0) CHECK(best <= prev_best);
        prev_best = best;
    }
}

TEST_CASE("one-state models have only one path", "[hmm]") {
    HiddenMarkovModel m;
    m.alphabet = {"a", "b"};
    m.initial = {1.0};
    m.transition = {1.0};
    m.emission = {0.25, 0.75};
    const Obs obs{0, 1, 1};
    const Path want{0, 0, 0};
    CHECK(gdfv::brute_force_decode(m, obs).path == want);
    CHECK(gdfv::viterbi_baseline(m, obs).first.path == want);
}

TEST_CASE("brute force instance-size cap", "[hmm]") {
    const auto model = gdfv::gen_random_model(10, 2, 1);
    const Obs obs(12, 0);
    CHECK_THROWS_AS(gdfv::brute_force_decode(model, obs), std::invalid_argument);
}

TEST_CASE("model validation", "[hmm]") {
    auto model = two_state_model();
    CHECK_NOTHROW(gdfv::validate_model(model));

    SECTION("names the violated transition row") {
        model.transition[2] = 0.3;  // row 2 now sums to 1.1
        CHECK_THROWS_WITH(gdfv::validate_model(model),
                          Catch::Matchers::ContainsSubstring("transition row 2"));
    }
    SECTION("names the violated emission row") {
        model.emission[0] = 0.5;
        CHECK_THROWS_WITH(gdfv::validate_model(model),
                          Catch::Matchers::ContainsSubstring("emission row 1"));
    }
    SECTION("rejects probabilities outside [0, 1]") {
        model.initial = {1.5, -0.5};
        CHECK_THROWS_AS(gdfv::validate_model(model), std::invalid_argument);
    }
    SECTION("renormalization fixes rows only when explicitly requested") {
        model.transition = {9, 1, 2, 8};
        CHECK_THROWS_AS(gdfv::validate_model(model), std::invalid_argument);
        gdfv::renormalize_model(model);
        CHECK_NOTHROW(gdfv::validate_model(model));
        CHECK(model.transition[0] == Catch::Approx(0.9));
    }
}

TEST_CASE("decoder agreement invariant across backends", "[hmm]") {
    for (int iter = 0; iter < 12; ++iter) {
        const std::uint64_t seed = gdfv::derive_seed(0xA9CEEu, iter);
        gdfv::Rng rng(seed);
        const std::size_t n = 8 + rng.below(17);  // 8..24
        const std::size_t k = 2 + rng.below(7);
        const std::size_t m = 1 + rng.below(60);
        const auto model = gdfv::gen_random_model(n, k, gdfv::derive_seed(seed, 1));
        const auto obs = gdfv::gen_random_observations(m, k, gdfv::derive_seed(seed, 2));

        const auto base = gdfv::viterbi_baseline(model, obs).first;
        const auto tree = gdfv::gdfv_preprocess(model, 0.45).decode(obs).first;
        const auto table = gdfv::gdfv_table_decode(model, obs, 2);

        CHECK(close(base.log_joint_prob, tree.log_joint_prob));
        CHECK(close(base.log_joint_prob, table.log_joint_prob));
        CHECK(base.path == tree.path);
        CHECK(base.path == table.path);
    }
}
