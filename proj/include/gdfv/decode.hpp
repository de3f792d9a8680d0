#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gdfv/extended_value.hpp"
#include "gdfv/hmm.hpp"

namespace gdfv {

/// A most probable state path (0-based states) with its joint log-probability.
struct DecodeResult {
    std::vector<std::int32_t> path;
    ExtendedValue log_joint_prob;
};

/// Dynamic-programming table of the decoders: per step i and state s the best
/// prefix log-probability log q_i(s), the predecessor chosen for i >= 1, and
/// the finalization outcome. log q_0 is the initial distribution; the symbol
/// consumed between steps i-1 and i is obs[i-1], emitted by the predecessor
/// state, and the last symbol's emission enters only at finalization.
struct Trellis {
    std::size_t steps = 0;   // m
    std::size_t states = 0;  // n
    std::vector<ExtendedValue> log_q;  // steps * states
    std::vector<std::int32_t> pred;    // steps * states, meaningful for step >= 1
    std::int32_t final_state = 0;
    ExtendedValue log_joint;

    ExtendedValue q(std::size_t step, std::size_t state) const {
        return log_q[step * states + state];
    }
};

namespace detail {

inline void check_obs(const HiddenMarkovModel& model, std::span<const std::int32_t> obs) {
    if (obs.empty()) throw std::invalid_argument("decode: empty observation sequence");
    for (const std::int32_t a : obs)
        if (a < 0 || static_cast<std::size_t>(a) >= model.symbol_count())
            throw std::invalid_argument("decode: symbol id out of range");
}

/// Transposed log-transition table: entry [s*n + s'] = log t_{s'}(s).
/// Shared by the Viterbi baseline and the multiplier construction so both
/// routes add identical floating-point terms.
inline std::vector<ExtendedValue> log_transition_transposed(const HiddenMarkovModel& model) {
    const std::size_t n = model.state_count();
    std::vector<ExtendedValue> lt(n * n);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t sp = 0; sp < n; ++sp)
            lt[s * n + sp] = ExtendedValue::log_prob(model.transition[sp * n + s]);
    return lt;
}

inline std::vector<ExtendedValue> log_emission(const HiddenMarkovModel& model) {
    std::vector<ExtendedValue> le(model.emission.size());
    for (std::size_t i = 0; i < le.size(); ++i)
        le[i] = ExtendedValue::log_prob(model.emission[i]);
    return le;
}

inline std::vector<ExtendedValue> log_initial(const HiddenMarkovModel& model) {
    std::vector<ExtendedValue> lp(model.initial.size());
    for (std::size_t s = 0; s < lp.size(); ++s)
        lp[s] = ExtendedValue::log_prob(model.initial[s]);
    return lp;
}

/// Applies the final emission factor and picks the best end state
/// (largest index on ties), then fills the trellis finalization fields.
inline void finalize_trellis(Trellis& trellis, std::span<const ExtendedValue> log_e,
                             std::size_t symbols, std::int32_t last_symbol) {
    const std::size_t n = trellis.states;
    const std::size_t last = trellis.steps - 1;
    ExtendedValue best = log_e[0 * symbols + last_symbol] + trellis.q(last, 0);
    std::size_t arg = 0;
    for (std::size_t s = 1; s < n; ++s) {
        const ExtendedValue cand = log_e[s * symbols + last_symbol] + trellis.q(last, s);
        if (cand >= best) {
            best = cand;
            arg = s;
        }
    }
    trellis.final_state = static_cast<std::int32_t>(arg);
    trellis.log_joint = best;
}

}  // namespace detail

/// log Pr(X, Y) = log pi_{x1} + sum log t + sum log e, with any zero factor
/// collapsing the whole product to -inf.
inline ExtendedValue joint_log_prob(const HiddenMarkovModel& model,
                                    std::span<const std::int32_t> path,
                                    std::span<const std::int32_t> obs) {
    const std::size_t n = model.state_count();
    const std::size_t k = model.symbol_count();
    if (path.size() != obs.size() || path.empty())
        throw std::invalid_argument("joint_log_prob: path and observation lengths differ");
    for (const std::int32_t s : path)
        if (s < 0 || static_cast<std::size_t>(s) >= n)
            throw std::invalid_argument("joint_log_prob: state out of range");
    detail::check_obs(model, obs);

    ExtendedValue total = ExtendedValue::log_prob(model.initial[path[0]]);
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        total += ExtendedValue::log_prob(model.transition[path[i] * n + path[i + 1]]);
    for (std::size_t i = 0; i < path.size(); ++i)
        total += ExtendedValue::log_prob(model.emission[path[i] * k + obs[i]]);
    return total;
}

/// Follows stored predecessors back from the trellis's final state.
inline std::vector<std::int32_t> backtrack(const Trellis& trellis) {
    std::vector<std::int32_t> path(trellis.steps);
    path[trellis.steps - 1] = trellis.final_state;
    for (std::size_t i = trellis.steps - 1; i > 0; --i)
        path[i - 1] = trellis.pred[i * trellis.states + path[i]];
    return path;
}

/// Classical two-phase Viterbi decoding in log space. Every argmax breaks
/// ties toward the larger state index, the same rule the dominance-based
/// decoder inherits from its column tags.
inline std::pair<DecodeResult, Trellis> viterbi_baseline(const HiddenMarkovModel& model,
                                                         std::span<const std::int32_t> obs,
                                                         std::uint64_t* comparisons = nullptr) {
    detail::check_obs(model, obs);
    const std::size_t n = model.state_count();
    const std::size_t k = model.symbol_count();
    const std::size_t m = obs.size();

    const auto log_tt = detail::log_transition_transposed(model);
    const auto log_e = detail::log_emission(model);
    const auto log_pi = detail::log_initial(model);

    Trellis trellis;
    trellis.steps = m;
    trellis.states = n;
    trellis.log_q.resize(m * n);
    trellis.pred.assign(m * n, 0);
    for (std::size_t s = 0; s < n; ++s) trellis.log_q[s] = log_pi[s];

    std::uint64_t cmp = 0;
    std::vector<ExtendedValue> u(n);
    for (std::size_t i = 1; i < m; ++i) {
        const std::int32_t a = obs[i - 1];
        const ExtendedValue* qprev = trellis.log_q.data() + (i - 1) * n;
        for (std::size_t sp = 0; sp < n; ++sp) u[sp] = qprev[sp] + log_e[sp * k + a];
        ExtendedValue* qcur = trellis.log_q.data() + i * n;
        std::int32_t* pred = trellis.pred.data() + i * n;
        for (std::size_t s = 0; s < n; ++s) {
            const ExtendedValue* row = log_tt.data() + s * n;
            ExtendedValue best = row[0] + u[0];
            std::size_t arg = 0;
            for (std::size_t sp = 1; sp < n; ++sp) {
                const ExtendedValue cand = row[sp] + u[sp];
                if (cand >= best) {
                    best = cand;
                    arg = sp;
                }
            }
            qcur[s] = best;
            pred[s] = static_cast<std::int32_t>(arg);
        }
        cmp += static_cast<std::uint64_t>(n) * n;
    }

    detail::finalize_trellis(trellis, log_e, k, obs[m - 1]);
    cmp += n;
    if (comparisons) *comparisons += cmp;

    DecodeResult result{backtrack(trellis), trellis.log_joint};
    return {std::move(result), std::move(trellis)};
}

/// Exhaustive decoding oracle over all n^m paths. Ties are broken toward the
/// path that is lexicographically largest read from the last state backwards,
/// which is exactly what the backward-greedy largest-index rule of the
/// dynamic-programming decoders produces.
inline DecodeResult brute_force_decode(const HiddenMarkovModel& model,
                                       std::span<const std::int32_t> obs) {
    detail::check_obs(model, obs);
    const std::size_t n = model.state_count();
    const std::size_t m = obs.size();

    double paths = 1.0;
    for (std::size_t i = 0; i < m; ++i) paths *= static_cast<double>(n);
    if (paths > 1e7)
        throw std::invalid_argument("brute_force_decode: instance too large (n^m > 1e7)");

    std::vector<std::int32_t> current(m, 0);
    std::vector<std::int32_t> best_path;
    ExtendedValue best = ExtendedValue::neg_infinity();
    bool have_best = false;

    const auto suffix_greater = [&](const std::vector<std::int32_t>& a,
                                    const std::vector<std::int32_t>& b) {
        for (std::size_t i = m; i > 0; --i) {
            if (a[i - 1] != b[i - 1]) return a[i - 1] > b[i - 1];
        }
        return false;
    };

    while (true) {
        const ExtendedValue p = joint_log_prob(model, current, obs);
        if (!have_best || p > best || (p == best && suffix_greater(current, best_path))) {
            best = p;
            best_path = current;
            have_best = true;
        }
        std::size_t pos = 0;
        while (pos < m) {
            if (++current[pos] < static_cast<std::int32_t>(n)) break;
            current[pos] = 0;
            ++pos;
        }
        if (pos == m) break;
    }
    return DecodeResult{std::move(best_path), best};
}

}  // namespace gdfv
