#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gdfv {

/// Time-homogeneous hidden Markov model: n states, an output alphabet,
/// initial distribution Pi, row-stochastic transition matrix T (t_s(s') =
/// transition[s*n + s']) and emission matrix E (e_s(a) = emission[s*k + a]).
/// States and symbols are 0-based in memory; the text formats are 1-based.
struct HiddenMarkovModel {
    std::vector<std::string> alphabet;
    std::vector<double> initial;
    std::vector<double> transition;
    std::vector<double> emission;

    std::size_t state_count() const noexcept { return initial.size(); }
    std::size_t symbol_count() const noexcept { return alphabet.size(); }

    /// 0-based symbol id, or -1 when unknown.
    int symbol_id(std::string_view name) const noexcept {
        for (std::size_t a = 0; a < alphabet.size(); ++a)
            if (alphabet[a] == name) return static_cast<int>(a);
        return -1;
    }
};

inline constexpr double kStochasticTolerance = 1e-9;

namespace detail {

inline void check_row(const double* row, std::size_t len, const std::string& what) {
    double sum = 0.0;
    for (std::size_t j = 0; j < len; ++j) {
        const double p = row[j];
        if (!std::isfinite(p) || p < 0.0 || p > 1.0 + kStochasticTolerance)
            throw std::invalid_argument(what + ": probability out of [0, 1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kStochasticTolerance)
        throw std::invalid_argument(what + " sums to " + std::to_string(sum) +
                                    ", expected 1 within 1e-9");
}

inline void normalize_row(double* row, std::size_t len, const std::string& what) {
    double sum = 0.0;
    for (std::size_t j = 0; j < len; ++j) {
        if (!std::isfinite(row[j]) || row[j] < 0.0)
            throw std::invalid_argument(what + ": cannot renormalize a negative entry");
        sum += row[j];
    }
    if (sum <= 0.0) throw std::invalid_argument(what + ": cannot renormalize a zero row");
    for (std::size_t j = 0; j < len; ++j) row[j] /= sum;
}

}  // namespace detail

/// Rejects models whose Pi, T rows or E rows are not stochastic within 1e-9.
/// Error messages name the offending row (1-based).
inline void validate_model(const HiddenMarkovModel& model) {
    const std::size_t n = model.state_count();
    const std::size_t k = model.symbol_count();
    if (n == 0) throw std::invalid_argument("model: no states");
    if (k == 0) throw std::invalid_argument("model: empty alphabet");
    if (model.transition.size() != n * n)
        throw std::invalid_argument("model: transition matrix size mismatch");
    if (model.emission.size() != n * k)
        throw std::invalid_argument("model: emission matrix size mismatch");
    detail::check_row(model.initial.data(), n, "initial distribution");
    for (std::size_t s = 0; s < n; ++s)
        detail::check_row(model.transition.data() + s * n, n,
                          "transition row " + std::to_string(s + 1));
    for (std::size_t s = 0; s < n; ++s)
        detail::check_row(model.emission.data() + s * k, k,
                          "emission row " + std::to_string(s + 1));
}

/// Renormalizes every row to sum 1. Only applied behind an explicit flag;
/// the default load path rejects non-stochastic input instead.
inline void renormalize_model(HiddenMarkovModel& model) {
    const std::size_t n = model.state_count();
    const std::size_t k = model.symbol_count();
    detail::normalize_row(model.initial.data(), n, "initial distribution");
    for (std::size_t s = 0; s < n; ++s)
        detail::normalize_row(model.transition.data() + s * n, n,
                              "transition row " + std::to_string(s + 1));
    for (std::size_t s = 0; s < n; ++s)
        detail::normalize_row(model.emission.data() + s * k, k,
                              "emission row " + std::to_string(s + 1));
}

}  // namespace gdfv
