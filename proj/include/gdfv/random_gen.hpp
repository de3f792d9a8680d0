#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gdfv/hmm.hpp"
#include "gdfv/maxplus.hpp"

namespace gdfv {

/// Project-wide random source. std::mt19937_64 is used because the standard
/// pins its exact output stream; the (0,1] mapping below uses only integer
/// shifts, so every generated instance is reproducible bit-for-bit across
/// platforms and toolchains for a given seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform over (0, 1]: the top 53 bits plus one, scaled by 2^-53.
    double uniform01() { return static_cast<double>((engine_() >> 11) + 1) * 0x1p-53; }

    /// Uniform over [0, n) by modulo reduction (bias is negligible for the
    /// alphabet sizes used here and keeps the stream platform-independent).
    std::uint32_t below(std::uint32_t n) {
        return static_cast<std::uint32_t>(engine_() % n);
    }

  private:
    std::mt19937_64 engine_;
};

/// Deterministic derivation of per-trial / per-object seeds (splitmix64 step).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Matrix with entries uniform over (0, 1]. When neg_inf_probability > 0,
/// each entry is independently replaced by -inf with that probability.
inline MaxPlusMatrix gen_random_matrix(std::size_t rows, std::size_t cols,
                                       std::uint64_t seed,
                                       double neg_inf_probability = 0.0) {
    Rng rng(seed);
    MaxPlusMatrix mat(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            if (neg_inf_probability > 0.0 && rng.uniform01() <= neg_inf_probability) {
                mat.at(i, j) = ExtendedValue::neg_infinity();
            } else {
                mat.at(i, j) = ExtendedValue::finite(rng.uniform01());
            }
        }
    return mat;
}

inline std::vector<ExtendedValue> gen_random_vector(std::size_t n, std::uint64_t seed,
                                                    double neg_inf_probability = 0.0) {
    Rng rng(seed);
    std::vector<ExtendedValue> v(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (neg_inf_probability > 0.0 && rng.uniform01() <= neg_inf_probability) {
            v[j] = ExtendedValue::neg_infinity();
        } else {
            v[j] = ExtendedValue::finite(rng.uniform01());
        }
    }
    return v;
}

/// Model with every row drawn uniform over (0, 1] and normalized to sum 1.
/// Symbols are named "a1".."ak".
inline HiddenMarkovModel gen_random_model(std::size_t n, std::size_t alphabet_size,
                                          std::uint64_t seed) {
    if (n == 0 || alphabet_size == 0)
        throw std::invalid_argument("gen_random_model: n and alphabet size must be >= 1");
    Rng rng(seed);
    HiddenMarkovModel model;
    model.alphabet.reserve(alphabet_size);
    for (std::size_t a = 0; a < alphabet_size; ++a)
        model.alphabet.push_back("a" + std::to_string(a + 1));

    const auto fill_row = [&rng](double* row, std::size_t len) {
        double sum = 0.0;
        for (std::size_t j = 0; j < len; ++j) {
            row[j] = rng.uniform01();
            sum += row[j];
        }
        for (std::size_t j = 0; j < len; ++j) row[j] /= sum;
    };

    model.initial.resize(n);
    fill_row(model.initial.data(), n);
    model.transition.resize(n * n);
    for (std::size_t s = 0; s < n; ++s) fill_row(model.transition.data() + s * n, n);
    model.emission.resize(n * alphabet_size);
    for (std::size_t s = 0; s < n; ++s)
        fill_row(model.emission.data() + s * alphabet_size, alphabet_size);
    return model;
}

inline std::vector<std::int32_t> gen_random_observations(std::size_t m,
                                                         std::size_t alphabet_size,
                                                         std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::int32_t> obs(m);
    for (std::size_t i = 0; i < m; ++i)
        obs[i] = static_cast<std::int32_t>(rng.below(static_cast<std::uint32_t>(alphabet_size)));
    return obs;
}

}  // namespace gdfv
