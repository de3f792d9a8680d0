#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gdfv/decode.hpp"
#include "gdfv/hmm.hpp"
#include "gdfv/maxplus.hpp"

namespace gdfv {

class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& source, std::size_t line, std::size_t column,
               const std::string& message)
        : std::runtime_error(source + ":" + std::to_string(line) + ":" +
                             std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

  private:
    std::size_t line_, column_;
};

/// Whitespace-token scanner that tracks line and column for diagnostics.
class TextScanner {
  public:
    explicit TextScanner(std::string_view text, std::string source = "<input>")
        : text_(text), source_(std::move(source)) {}

    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }

    std::string_view next_token() {
        if (at_end()) throw error("unexpected end of input");
        tok_line_ = line_;
        tok_col_ = col_;
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !is_space(text_[pos_])) advance();
        return text_.substr(start, pos_ - start);
    }

    double next_double() {
        const std::string_view tok = next_token();
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size())
            throw token_error("expected a number, got '" + std::string(tok) + "'");
        return v;
    }

    /// A decimal literal or the token "-inf".
    ExtendedValue next_entry() {
        const std::string_view tok = next_token();
        if (tok == "-inf") return ExtendedValue::neg_infinity();
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v))
            throw token_error("expected a number or '-inf', got '" + std::string(tok) + "'");
        return ExtendedValue::finite(v);
    }

    long long next_integer(long long min, long long max, const char* what) {
        const std::string_view tok = next_token();
        long long v = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size())
            throw token_error(std::string("expected ") + what + ", got '" + std::string(tok) +
                              "'");
        if (v < min || v > max)
            throw token_error(std::string(what) + " out of range [" + std::to_string(min) +
                              ", " + std::to_string(max) + "]: " + std::string(tok));
        return v;
    }

    ParseError error(const std::string& message) const {
        return ParseError(source_, line_, col_, message);
    }
    ParseError token_error(const std::string& message) const {
        return ParseError(source_, tok_line_, tok_col_, message);
    }

  private:
    static bool is_space(char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
    }
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    void skip_ws() {
        while (pos_ < text_.size() && is_space(text_[pos_])) advance();
    }

    std::string_view text_;
    std::string source_;
    std::size_t pos_ = 0, line_ = 1, col_ = 1;
    std::size_t tok_line_ = 1, tok_col_ = 1;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string format_entry(ExtendedValue v) {
    return v.is_finite() ? format_double(v.value()) : std::string("-inf");
}

// --- matrix / vector text format -------------------------------------------
// Matrix: first line "m n", then m lines of n entries (decimal or "-inf").
// Vector: first line "n", then one line of n entries.

inline MaxPlusMatrix read_matrix(TextScanner& in) {
    const auto m = static_cast<std::size_t>(in.next_integer(1, 1 << 30, "row count"));
    const auto n = static_cast<std::size_t>(in.next_integer(1, 1 << 30, "column count"));
    MaxPlusMatrix mat(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) mat.at(i, j) = in.next_entry();
    return mat;
}

inline void write_matrix(std::ostream& out, const MaxPlusMatrix& mat) {
    out << mat.rows() << ' ' << mat.cols() << '\n';
    for (std::size_t i = 0; i < mat.rows(); ++i) {
        for (std::size_t j = 0; j < mat.cols(); ++j) {
            if (j) out << ' ';
            out << format_entry(mat.at(i, j));
        }
        out << '\n';
    }
}

inline std::vector<ExtendedValue> read_vector(TextScanner& in) {
    const auto n = static_cast<std::size_t>(in.next_integer(1, 1 << 30, "length"));
    std::vector<ExtendedValue> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = in.next_entry();
    return v;
}

inline void write_vector(std::ostream& out, std::span<const ExtendedValue> v) {
    out << v.size() << '\n';
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (j) out << ' ';
        out << format_entry(v[j]);
    }
    out << '\n';
}

// --- model / observation text format ----------------------------------------
// Model: line 1 "n k"; line 2 the k symbol names; line 3 the n initial
// probabilities; then n rows of n transition probabilities (row = from-state);
// then n rows of k emission probabilities.

inline HiddenMarkovModel read_model(TextScanner& in) {
    HiddenMarkovModel model;
    const auto n = static_cast<std::size_t>(in.next_integer(1, 1 << 20, "state count"));
    const auto k = static_cast<std::size_t>(in.next_integer(1, 1 << 20, "alphabet size"));
    model.alphabet.reserve(k);
    for (std::size_t a = 0; a < k; ++a) {
        std::string name(in.next_token());
        if (model.symbol_id(name) >= 0)
            throw in.token_error("duplicate symbol '" + name + "'");
        model.alphabet.push_back(std::move(name));
    }
    model.initial.resize(n);
    for (std::size_t s = 0; s < n; ++s) model.initial[s] = in.next_double();
    model.transition.resize(n * n);
    for (std::size_t i = 0; i < n * n; ++i) model.transition[i] = in.next_double();
    model.emission.resize(n * k);
    for (std::size_t i = 0; i < n * k; ++i) model.emission[i] = in.next_double();
    return model;
}

inline void write_model(std::ostream& out, const HiddenMarkovModel& model) {
    const std::size_t n = model.state_count();
    const std::size_t k = model.symbol_count();
    out << n << ' ' << k << '\n';
    for (std::size_t a = 0; a < k; ++a) out << (a ? " " : "") << model.alphabet[a];
    out << '\n';
    for (std::size_t s = 0; s < n; ++s)
        out << (s ? " " : "") << format_double(model.initial[s]);
    out << '\n';
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t j = 0; j < n; ++j)
            out << (j ? " " : "") << format_double(model.transition[s * n + j]);
        out << '\n';
    }
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t a = 0; a < k; ++a)
            out << (a ? " " : "") << format_double(model.emission[s * k + a]);
        out << '\n';
    }
}

/// Whitespace/newline-separated symbol names, mapped to 0-based ids.
inline std::vector<std::int32_t> read_observations(TextScanner& in,
                                                   const HiddenMarkovModel& model) {
    std::vector<std::int32_t> obs;
    while (!in.at_end()) {
        const std::string_view tok = in.next_token();
        const int id = model.symbol_id(tok);
        if (id < 0) throw in.token_error("unknown symbol '" + std::string(tok) + "'");
        obs.push_back(id);
    }
    return obs;
}

inline void write_observations(std::ostream& out, const HiddenMarkovModel& model,
                               std::span<const std::int32_t> obs) {
    for (std::size_t i = 0; i < obs.size(); ++i)
        out << (i ? " " : "") << model.alphabet[obs[i]];
    out << '\n';
}

/// Line 1: space-separated 1-based state indices. Line 2: "logprob <value>".
inline void write_decode_result(std::ostream& out, const DecodeResult& result) {
    for (std::size_t i = 0; i < result.path.size(); ++i)
        out << (i ? " " : "") << result.path[i] + 1;
    out << '\n';
    out << "logprob " << format_entry(result.log_joint_prob) << '\n';
}

}  // namespace gdfv
