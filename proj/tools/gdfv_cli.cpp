// Command-line front end: file-based decoding, reproducible multiplication
// and decoding benchmarks with CSV output, and random model generation.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "gdfv/gdfv.hpp"

namespace {

gdfv::HiddenMarkovModel load_model(const std::string& path, bool renormalize) {
    const std::string text = gdfv::read_file(path);
    gdfv::TextScanner scanner(text, path);
    gdfv::HiddenMarkovModel model = gdfv::read_model(scanner);
    if (renormalize)
        gdfv::renormalize_model(model);
    else
        gdfv::validate_model(model);
    return model;
}

std::vector<std::int32_t> load_observations(const std::string& path,
                                            const gdfv::HiddenMarkovModel& model) {
    const std::string text = gdfv::read_file(path);
    gdfv::TextScanner scanner(text, path);
    return gdfv::read_observations(scanner, model);
}

int run_decode(const std::string& model_path, const std::string& obs_path,
               const std::string& algorithm, double alpha, std::size_t table_width,
               bool renormalize, std::uint64_t mem_budget) {
    const gdfv::HiddenMarkovModel model = load_model(model_path, renormalize);
    const std::vector<std::int32_t> obs = load_observations(obs_path, model);

    gdfv::DecodeResult result;
    if (algorithm == "viterbi") {
        result = gdfv::viterbi_baseline(model, obs).first;
    } else if (algorithm == "gdfv") {
        const auto decoder = gdfv::gdfv_preprocess(model, alpha, mem_budget);
        result = decoder.decode(obs).first;
    } else if (algorithm == "gdfv-table") {
        const std::size_t width = table_width > 0
                                      ? table_width
                                      : gdfv::gdfv_block_width(model.state_count(), alpha);
        result = gdfv::gdfv_table_decode(model, obs, width, mem_budget);
    } else if (algorithm == "brute") {
        result = gdfv::brute_force_decode(model, obs);
    } else {
        throw std::invalid_argument("unknown algorithm: " + algorithm);
    }
    gdfv::write_decode_result(std::cout, result);
    return 0;
}

void emit_csv(const gdfv::BenchResult& result, const std::string& out_path) {
    if (out_path.empty()) {
        gdfv::write_csv(std::cout, result);
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open file: " + out_path);
    gdfv::write_csv(out, result);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hidden Markov Model decoding via online (max,+)-multiplication"};
    app.require_subcommand(1);

    std::string model_path, obs_path, out_path;
    std::string algorithm = "viterbi";
    std::string mode = "ops";
    bool renormalize = false;
    std::size_t table_width = 0;
    gdfv::BenchConfig cfg;
    std::size_t gen_obs_len = 0;
    std::string obs_out;

    CLI::App* decode = app.add_subcommand("decode", "decode an observation file");
    decode->add_option("model", model_path, "model file")->required();
    decode->add_option("obs", obs_path, "observation file")->required();
    decode->add_option("--algorithm", algorithm, "viterbi|gdfv|gdfv-table|brute")
        ->check(CLI::IsMember({"viterbi", "gdfv", "gdfv-table", "brute"}));
    decode->add_option("--alpha", cfg.alpha, "block width factor, in (0, 0.5)");
    decode->add_option("--t", table_width, "explicit block width for gdfv-table");
    decode->add_flag("--renormalize", renormalize, "renormalize model rows on load");
    decode->add_option("--mem-budget", cfg.mem_budget_bytes, "preprocessing budget in bytes");

    CLI::App* bench_mul = app.add_subcommand(
        "bench-mul", "compare block-engine multiplication against the trivial engine");
    bench_mul->add_option("--n", cfg.n, "matrix rows");
    bench_mul->add_option("--t", cfg.t, "matrix columns (block width)");
    bench_mul->add_option("--trials", cfg.trials, "number of trials");
    bench_mul->add_option("--vectors", cfg.vectors_per_trial, "vectors per trial");
    bench_mul->add_option("--seed", cfg.seed, "base seed");
    bench_mul->add_option("--mode", mode, "ops|wall")->check(CLI::IsMember({"ops", "wall"}));
    bench_mul->add_option("--algorithm", algorithm, "gdfv|gdfv-table engine")
        ->check(CLI::IsMember({"gdfv", "gdfv-table"}));
    bench_mul->add_option("--mem-budget", cfg.mem_budget_bytes, "budget in bytes");
    bench_mul->add_option("--out", out_path, "CSV output path (default: stdout)");

    CLI::App* bench_decode = app.add_subcommand(
        "bench-decode", "compare GDFV decoding against the Viterbi baseline");
    bench_decode->add_option("--n", cfg.n, "model size");
    bench_decode->add_option("--m", cfg.m, "observation length");
    bench_decode->add_option("--k", cfg.alphabet_size, "alphabet size");
    bench_decode->add_option("--alpha", cfg.alpha, "block width factor");
    bench_decode->add_option("--trials", cfg.trials, "number of trials");
    bench_decode->add_option("--seed", cfg.seed, "base seed");
    bench_decode->add_option("--mode", mode, "ops|wall")
        ->check(CLI::IsMember({"ops", "wall"}));
    bench_decode->add_option("--mem-budget", cfg.mem_budget_bytes, "budget in bytes");
    bench_decode->add_option("--out", out_path, "CSV output path (default: stdout)");

    CLI::App* gen_model = app.add_subcommand("gen-model", "generate a random model file");
    gen_model->add_option("--n", cfg.n, "state count");
    gen_model->add_option("--k", cfg.alphabet_size, "alphabet size");
    gen_model->add_option("--seed", cfg.seed, "seed");
    gen_model->add_option("--out", out_path, "model output path (default: stdout)");
    gen_model->add_option("--m", gen_obs_len, "also generate m random observations");
    gen_model->add_option("--obs-out", obs_out, "observation output path");

    CLI11_PARSE(app, argc, argv);
    cfg.wall_clock = mode == "wall";

    try {
        if (decode->parsed())
            return run_decode(model_path, obs_path, algorithm, cfg.alpha, table_width,
                              renormalize, cfg.mem_budget_bytes);
        if (bench_mul->parsed()) {
            cfg.use_table = algorithm == "gdfv-table";
            emit_csv(gdfv::bench_mul(cfg), out_path);
            return 0;
        }
        if (bench_decode->parsed()) {
            emit_csv(gdfv::bench_decode(cfg), out_path);
            return 0;
        }
        if (gen_model->parsed()) {
            const gdfv::HiddenMarkovModel model =
                gdfv::gen_random_model(cfg.n, cfg.alphabet_size, cfg.seed);
            if (out_path.empty()) {
                gdfv::write_model(std::cout, model);
            } else {
                std::ofstream out(out_path);
                if (!out) throw std::runtime_error("cannot open file: " + out_path);
                gdfv::write_model(out, model);
            }
            if (gen_obs_len > 0) {
                const auto obs = gdfv::gen_random_observations(
                    gen_obs_len, cfg.alphabet_size, gdfv::derive_seed(cfg.seed, 1));
                if (obs_out.empty()) {
                    gdfv::write_observations(std::cout, model, obs);
                } else {
                    std::ofstream out(obs_out);
                    if (!out) throw std::runtime_error("cannot open file: " + obs_out);
                    gdfv::write_observations(out, model, obs);
                }
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
