#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <stdexcept>

namespace gdfv {

/// A value in R u {-inf}, the carrier of all log-space computation.
///
/// Internally a double whose only non-finite state is -infinity, so IEEE
/// ordering and addition coincide with the intended semantics: -inf compares
/// below every finite value and absorbs sums. NaN and +inf are rejected at
/// construction, which keeps the order total.
class ExtendedValue {
  public:
    constexpr ExtendedValue() noexcept = default;

    static ExtendedValue finite(double x) {
        if (!std::isfinite(x))
            throw std::invalid_argument("ExtendedValue::finite: value is not finite");
        return ExtendedValue(x);
    }

    static constexpr ExtendedValue neg_infinity() noexcept { return ExtendedValue(); }

    /// log p for a probability p >= 0, with log 0 = -inf.
    static ExtendedValue log_prob(double p) {
        if (!std::isfinite(p) || p < 0.0)
            throw std::invalid_argument("ExtendedValue::log_prob: probability must be finite and >= 0");
        return p == 0.0 ? neg_infinity() : finite(std::log(p));
    }

    constexpr bool is_finite() const noexcept {
        return v_ != -std::numeric_limits<double>::infinity();
    }
    constexpr bool is_neg_infinity() const noexcept { return !is_finite(); }

    /// The underlying double; -inf when neg_infinity.
    constexpr double value() const noexcept { return v_; }

    friend constexpr ExtendedValue operator+(ExtendedValue a, ExtendedValue b) noexcept {
        return ExtendedValue(a.v_ + b.v_);
    }
    ExtendedValue& operator+=(ExtendedValue o) noexcept {
        v_ += o.v_;
        return *this;
    }

    friend constexpr bool operator==(ExtendedValue a, ExtendedValue b) noexcept {
        return a.v_ == b.v_;
    }
    friend constexpr auto operator<=>(ExtendedValue a, ExtendedValue b) noexcept {
        return a.v_ <=> b.v_;
    }

  private:
    explicit constexpr ExtendedValue(double v) noexcept : v_(v) {}
    double v_ = -std::numeric_limits<double>::infinity();
};

}  // namespace gdfv
