#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "gdfv/block_multiplier.hpp"
#include "gdfv/decode.hpp"
#include "gdfv/dominance_table.hpp"
#include "gdfv/dominance_tree.hpp"
#include "gdfv/gdfv_decoder.hpp"
#include "gdfv/maxplus.hpp"
#include "gdfv/random_gen.hpp"
#include "gdfv/text_io.hpp"

namespace gdfv {

inline constexpr double kAgreementTolerance = 1e-9;

/// Relative 1e-9 agreement (absolute near zero); -inf only agrees with -inf.
inline bool values_agree(ExtendedValue a, ExtendedValue b,
                         double tol = kAgreementTolerance) {
    if (!a.is_finite() || !b.is_finite()) return a.is_finite() == b.is_finite();
    const double x = a.value(), y = b.value();
    return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
}

struct BenchConfig {
    std::uint64_t seed = 1;
    std::size_t trials = 25;
    std::size_t vectors_per_trial = 10000;
    std::size_t n = 1024;       // matrix rows (bench_mul) / model size (bench_decode)
    std::size_t t = 2;          // block width (bench_mul)
    double alpha = 0.25;        // block width rule (bench_decode)
    std::size_t m = 1000;       // observation length (bench_decode)
    std::size_t alphabet_size = 4;
    bool wall_clock = false;    // false = op-count mode; elapsed_ns stays 0
    bool use_table = false;     // back bench_mul with lookup tables instead of trees
    std::uint64_t mem_budget_bytes = std::uint64_t{3} << 30;
};

struct BenchRecord {
    std::size_t trial = 0;
    std::string algorithm;  // trivial | gdfv-tree | gdfv-table | viterbi
    std::uint64_t elapsed_ns = 0;
    std::uint64_t comparisons = 0;
    std::uint64_t tree_visits = 0;
    std::uint64_t checksum = 0;
};

/// Distribution of the per-trial throughput ratio (baseline work over GDFV
/// work in op-count mode, baseline time over GDFV time in wall-clock mode).
struct BenchSummary {
    std::size_t trials = 0;
    double min = 0, median = 0, mean = 0, max = 0, stddev = 0;
};

struct BenchResult {
    std::vector<BenchRecord> records;
    BenchSummary summary;
};

/// A trial whose engines disagreed beyond tolerance. The offending instance
/// is dumped to a file before this is thrown; no records for the trial are
/// emitted.
class BenchMismatchError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::uint64_t fnv1a64(std::uint64_t hash, std::uint64_t word) {
    for (int byte = 0; byte < 8; ++byte) {
        hash ^= (word >> (8 * byte)) & 0xFF;
        hash *= 0x100000001B3ULL;
    }
    return hash;
}
inline constexpr std::uint64_t kFnvBasis = 0xCBF29CE484222325ULL;

inline std::uint64_t checksum_mul(std::uint64_t hash, const MulResult& r) {
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        hash = fnv1a64(hash, std::bit_cast<std::uint64_t>(r.values[i].value()));
        hash = fnv1a64(hash, static_cast<std::uint64_t>(r.argmax_cols[i]));
    }
    return hash;
}

inline BenchSummary summarize(std::vector<double> ratios) {
    BenchSummary s;
    s.trials = ratios.size();
    if (ratios.empty()) return s;
    std::sort(ratios.begin(), ratios.end());
    s.min = ratios.front();
    s.max = ratios.back();
    const std::size_t mid = ratios.size() / 2;
    s.median = ratios.size() % 2 ? ratios[mid] : 0.5 * (ratios[mid - 1] + ratios[mid]);
    double sum = 0;
    for (const double r : ratios) sum += r;
    s.mean = sum / static_cast<double>(ratios.size());
    double var = 0;
    for (const double r : ratios) var += (r - s.mean) * (r - s.mean);
    s.stddev = std::sqrt(var / static_cast<double>(ratios.size()));
    return s;
}

class StopWatch {
  public:
    explicit StopWatch(bool enabled) : enabled_(enabled) {}
    template <class F>
    void run(std::uint64_t& sink_ns, F&& f) {
        if (!enabled_) {
            f();
            return;
        }
        const auto start = std::chrono::steady_clock::now();
        f();
        const auto stop = std::chrono::steady_clock::now();
        sink_ns += static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
    }

  private:
    bool enabled_;
};

}  // namespace detail

/// One bench_mul trial: a fresh n x t matrix, preprocessed once, multiplied
/// with a stream of vectors by both the trivial engine and the block engine.
/// Every vector's outputs are checked for 1e-9 value agreement before any
/// counts are credited.
template <DominanceBackend Backend>
BenchResult bench_mul_with(const BenchConfig& cfg) {
    if (cfg.trials < 1 || cfg.n < 1 || cfg.t < 1 || cfg.vectors_per_trial < 1)
        throw std::invalid_argument("bench_mul: trials, n, t and vectors must be >= 1");

    const char* tag = std::is_same_v<Backend, DominanceTable<Triple>> ? "gdfv-table"
                                                                      : "gdfv-tree";
    BenchResult result;
    std::vector<double> ratios;
    detail::StopWatch watch(cfg.wall_clock);

    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        const std::uint64_t mat_seed = derive_seed(cfg.seed, 2 * trial);
        const std::uint64_t vec_seed = derive_seed(cfg.seed, 2 * trial + 1);
        const MaxPlusMatrix a = gen_random_matrix(cfg.n, cfg.t, mat_seed);
        const BlockMultiplier<Backend> engine(a, cfg.mem_budget_bytes);

        MulStats trivial_stats, gdfv_stats;
        std::uint64_t trivial_ns = 0, gdfv_ns = 0;
        std::uint64_t trivial_chk = detail::kFnvBasis, gdfv_chk = detail::kFnvBasis;

        Rng vec_rng(vec_seed);
        std::vector<ExtendedValue> b(cfg.t);
        MulResult trivial_out, gdfv_out;
        for (std::size_t v = 0; v < cfg.vectors_per_trial; ++v) {
            for (std::size_t j = 0; j < cfg.t; ++j)
                b[j] = ExtendedValue::finite(vec_rng.uniform01());

            watch.run(trivial_ns,
                      [&] { trivial_out = multiply_trivial(a, b, &trivial_stats); });
            watch.run(gdfv_ns, [&] { engine.multiply(b, gdfv_out, &gdfv_stats); });

            for (std::size_t i = 0; i < cfg.n; ++i) {
                if (!values_agree(trivial_out.values[i], gdfv_out.values[i])) {
                    const std::string dump =
                        "bench_mul_mismatch_trial" + std::to_string(trial) + ".txt";
                    std::ofstream out(dump);
                    write_matrix(out, a);
                    write_vector(out, b);
                    throw BenchMismatchError(
                        "bench_mul: trial " + std::to_string(trial) + " row " +
                        std::to_string(i + 1) +
                        " disagrees beyond tolerance; instance dumped to " + dump);
                }
            }
            trivial_chk = detail::checksum_mul(trivial_chk, trivial_out);
            gdfv_chk = detail::checksum_mul(gdfv_chk, gdfv_out);
        }

        result.records.push_back(BenchRecord{trial, "trivial", trivial_ns,
                                             trivial_stats.trivial_comparisons, 0,
                                             trivial_chk});
        result.records.push_back(BenchRecord{
            trial, tag, gdfv_ns,
            gdfv_stats.result_writes + gdfv_stats.merge_comparisons,
            gdfv_stats.tree_visits, gdfv_chk});

        const double ratio =
            cfg.wall_clock
                ? static_cast<double>(trivial_ns) / std::max<double>(1.0, gdfv_ns)
                : static_cast<double>(trivial_stats.trivial_comparisons) /
                      static_cast<double>(gdfv_stats.work_units());
        ratios.push_back(ratio);
    }
    result.summary = detail::summarize(std::move(ratios));
    return result;
}

inline BenchResult bench_mul(const BenchConfig& cfg) {
    return cfg.use_table ? bench_mul_with<DominanceTable<Triple>>(cfg)
                         : bench_mul_with<DominanceTree<Triple>>(cfg);
}

/// One bench_decode trial: a fresh random model and observation sequence,
/// decoded by the Viterbi baseline and by the preprocessed GDFV decoder
/// (preprocessing excluded from the timed section). Log-probabilities must
/// agree within 1e-9 before the trial is emitted.
inline BenchResult bench_decode(const BenchConfig& cfg) {
    if (cfg.trials < 1 || cfg.n < 2 || cfg.m < 1 || cfg.alphabet_size < 1)
        throw std::invalid_argument("bench_decode: need trials >= 1, n >= 2, m >= 1, k >= 1");

    BenchResult result;
    std::vector<double> ratios;
    detail::StopWatch watch(cfg.wall_clock);

    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        const std::uint64_t model_seed = derive_seed(cfg.seed, 2 * trial);
        const std::uint64_t obs_seed = derive_seed(cfg.seed, 2 * trial + 1);
        const HiddenMarkovModel model = gen_random_model(cfg.n, cfg.alphabet_size, model_seed);
        const std::vector<std::int32_t> obs =
            gen_random_observations(cfg.m, cfg.alphabet_size, obs_seed);

        std::uint64_t viterbi_cmp = 0, viterbi_ns = 0, gdfv_ns = 0;
        std::pair<DecodeResult, Trellis> base, fast;
        watch.run(viterbi_ns, [&] { base = viterbi_baseline(model, obs, &viterbi_cmp); });

        const GdfvTreeDecoder decoder =
            gdfv_preprocess(model, cfg.alpha, cfg.mem_budget_bytes);
        MulStats gdfv_stats;
        watch.run(gdfv_ns, [&] { fast = decoder.decode(obs, &gdfv_stats); });

        if (!values_agree(base.first.log_joint_prob, fast.first.log_joint_prob)) {
            const std::string dump =
                "bench_decode_mismatch_trial" + std::to_string(trial) + ".txt";
            std::ofstream out(dump);
            write_model(out, model);
            write_observations(out, model, obs);
            throw BenchMismatchError("bench_decode: trial " + std::to_string(trial) +
                                     " log-probabilities disagree beyond tolerance; "
                                     "instance dumped to " +
                                     dump);
        }

        const auto checksum_decode = [](const DecodeResult& r) {
            std::uint64_t h = detail::kFnvBasis;
            for (const std::int32_t s : r.path)
                h = detail::fnv1a64(h, static_cast<std::uint64_t>(s));
            return detail::fnv1a64(h,
                                   std::bit_cast<std::uint64_t>(r.log_joint_prob.value()));
        };

        result.records.push_back(
            BenchRecord{trial, "viterbi", viterbi_ns, viterbi_cmp, 0,
                        checksum_decode(base.first)});
        result.records.push_back(BenchRecord{
            trial, "gdfv-tree", gdfv_ns,
            gdfv_stats.result_writes + gdfv_stats.merge_comparisons,
            gdfv_stats.tree_visits, checksum_decode(fast.first)});

        const double ratio =
            cfg.wall_clock ? static_cast<double>(viterbi_ns) / std::max<double>(1.0, gdfv_ns)
                           : static_cast<double>(viterbi_cmp) /
                                 static_cast<double>(gdfv_stats.work_units());
        ratios.push_back(ratio);
    }
    result.summary = detail::summarize(std::move(ratios));
    return result;
}

/// CSV schema: one header, one row per (trial, algorithm), then a summary
/// block prefixed "#summary". In op-count mode every field is deterministic
/// for a fixed seed; wall-clock mode adds nondeterministic elapsed_ns.
inline void write_csv(std::ostream& out, const BenchResult& result) {
    out << "trial,algorithm,elapsed_ns,comparisons,tree_visits,checksum\n";
    for (const BenchRecord& r : result.records)
        out << r.trial << ',' << r.algorithm << ',' << r.elapsed_ns << ',' << r.comparisons
            << ',' << r.tree_visits << ',' << r.checksum << '\n';
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "#summary,metric=throughput_ratio,trials=%zu,min=%.9g,median=%.9g,"
                  "mean=%.9g,max=%.9g,stddev=%.9g\n",
                  result.summary.trials, result.summary.min, result.summary.median,
                  result.summary.mean, result.summary.max, result.summary.stddev);
    out << buf;
}

}  // namespace gdfv
