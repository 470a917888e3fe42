#pragma once

// Exact dyadic geometry on the half-line: points n/2^p, lengths m*2^e,
// dyadic intervals [k 2^-j, (k+1) 2^-j) and the dyadic ultrametric.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace haarlip {

using BigInt = boost::multiprecision::cpp_int;

namespace detail {

inline std::int64_t bit_length(const BigInt& v) {
    return v.is_zero() ? 0 : static_cast<std::int64_t>(boost::multiprecision::msb(v)) + 1;
}

inline std::uint64_t trailing_zeros(const BigInt& v) {
    return static_cast<std::uint64_t>(boost::multiprecision::lsb(v));
}

// floor(v * 2^shift) for integer shift of any sign, v >= 0.
inline BigInt shift(const BigInt& v, std::int64_t by) {
    if (by >= 0) return v << static_cast<unsigned>(by);
    return v >> static_cast<unsigned>(-by);
}

// m * 2^e as a double, without overflowing the conversion of m.
inline double ldexp_big(const BigInt& m, std::int64_t e) {
    if (m.is_zero()) return 0.0;
    const std::int64_t bits = bit_length(m);
    if (bits <= 64) return std::ldexp(static_cast<double>(m.convert_to<std::uint64_t>()), static_cast<int>(e));
    // keep the 64 leading bits; the dropped tail is below double precision
    const std::int64_t drop = bits - 64;
    const BigInt top = m >> static_cast<unsigned>(drop);
    return std::ldexp(static_cast<double>(top.convert_to<std::uint64_t>()), static_cast<int>(e + drop));
}

}  // namespace detail

/// Exact nonnegative dyadic quantity mantissa * 2^exponent. Used for
/// interval lengths, distances and |x - y|.
class DyadicScalar {
public:
    DyadicScalar() = default;

    DyadicScalar(BigInt mantissa, std::int64_t exponent) : mantissa_(std::move(mantissa)), exponent_(exponent) {
        if (mantissa_ < 0) throw std::invalid_argument("DyadicScalar: negative mantissa");
        normalize();
    }

    static DyadicScalar power_of_two(std::int64_t exponent) { return {BigInt(1), exponent}; }

    const BigInt& mantissa() const noexcept { return mantissa_; }
    std::int64_t exponent() const noexcept { return exponent_; }
    bool is_zero() const noexcept { return mantissa_.is_zero(); }

    /// Log2 of the value when it is an exact power of two.
    std::optional<std::int64_t> log2_exact() const {
        if (mantissa_ == 1) return exponent_;
        return std::nullopt;
    }

    double to_double() const { return detail::ldexp_big(mantissa_, exponent_); }

    /// value^alpha in floating point; exact exponent arithmetic for powers of two.
    double pow(double alpha) const {
        if (is_zero()) return 0.0;
        if (mantissa_ == 1) return std::exp2(static_cast<double>(exponent_) * alpha);
        const std::int64_t bits = detail::bit_length(mantissa_);
        // value = (m / 2^bits) * 2^(e+bits) with the first factor in [1/2, 1)
        const double frac = detail::ldexp_big(mantissa_, -bits);
        return std::pow(frac, alpha) * std::exp2(static_cast<double>(exponent_ + bits) * alpha);
    }

    friend bool operator==(const DyadicScalar&, const DyadicScalar&) = default;

    friend std::strong_ordering operator<=>(const DyadicScalar& a, const DyadicScalar& b) {
        if (a.is_zero() || b.is_zero()) return !a.is_zero() <=> !b.is_zero();
        const std::int64_t lo = std::min(a.exponent_, b.exponent_);
        const BigInt lhs = a.mantissa_ << static_cast<unsigned>(a.exponent_ - lo);
        const BigInt rhs = b.mantissa_ << static_cast<unsigned>(b.exponent_ - lo);
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend DyadicScalar operator*(const DyadicScalar& a, const DyadicScalar& b) {
        return {a.mantissa_ * b.mantissa_, a.exponent_ + b.exponent_};
    }

    /// "4", "0", or "3/2^5" for fractional values.
    std::string to_string() const {
        if (exponent_ >= 0) return BigInt(mantissa_ << static_cast<unsigned>(exponent_)).str();
        return mantissa_.str() + "/2^" + std::to_string(-exponent_);
    }

private:
    void normalize() {
        if (mantissa_.is_zero()) {
            exponent_ = 0;
            return;
        }
        const auto tz = detail::trailing_zeros(mantissa_);
        if (tz > 0) {
            mantissa_ >>= static_cast<unsigned>(tz);
            exponent_ += static_cast<std::int64_t>(tz);
        }
    }

    BigInt mantissa_{0};
    std::int64_t exponent_{0};
};

/// Exact point numerator / 2^scale of the nonnegative half-line, kept in
/// canonical form (scale == 0 or numerator odd).
class DyadicPoint {
public:
    DyadicPoint() = default;

    DyadicPoint(BigInt numerator, std::uint32_t scale) : numerator_(std::move(numerator)), scale_(scale) {
        if (numerator_ < 0) throw std::invalid_argument("DyadicPoint: negative value");
        if (numerator_.is_zero()) {
            scale_ = 0;
        } else if (scale_ > 0) {
            const auto tz = std::min<std::uint64_t>(detail::trailing_zeros(numerator_), scale_);
            numerator_ >>= static_cast<unsigned>(tz);
            scale_ -= static_cast<std::uint32_t>(tz);
        }
    }

    static DyadicPoint integer(std::uint64_t n) { return {BigInt(n), 0}; }

    const BigInt& numerator() const noexcept { return numerator_; }
    std::uint32_t scale() const noexcept { return scale_; }

    /// floor(x * 2^j), exact for any integer j.
    BigInt floor_scaled(std::int64_t j) const {
        return detail::shift(numerator_, j - static_cast<std::int64_t>(scale_));
    }

    double to_double() const { return detail::ldexp_big(numerator_, -static_cast<std::int64_t>(scale_)); }

    friend bool operator==(const DyadicPoint&, const DyadicPoint&) = default;

    friend std::strong_ordering operator<=>(const DyadicPoint& a, const DyadicPoint& b) {
        const std::uint32_t s = std::max(a.scale_, b.scale_);
        const BigInt lhs = a.numerator_ << (s - a.scale_);
        const BigInt rhs = b.numerator_ << (s - b.scale_);
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    /// "5", or "3/2^4" when not an integer.
    std::string to_string() const {
        if (scale_ == 0) return numerator_.str();
        return numerator_.str() + "/2^" + std::to_string(scale_);
    }

private:
    BigInt numerator_{0};
    std::uint32_t scale_{0};
};

inline DyadicScalar abs_diff(const DyadicPoint& x, const DyadicPoint& y) {
    const std::uint32_t s = std::max(x.scale(), y.scale());
    const BigInt a = x.numerator() << (s - x.scale());
    const BigInt b = y.numerator() << (s - y.scale());
    return {a > b ? BigInt(a - b) : BigInt(b - a), -static_cast<std::int64_t>(s)};
}

/// I^j_k = [k 2^-j, (k+1) 2^-j). Level may be negative (intervals longer than 1).
class DyadicInterval {
public:
    constexpr DyadicInterval() = default;
    constexpr DyadicInterval(std::int32_t level, std::uint64_t index) : level_(level), index_(index) {}

    constexpr std::int32_t level() const noexcept { return level_; }
    constexpr std::uint64_t index() const noexcept { return index_; }

    DyadicScalar length() const { return DyadicScalar::power_of_two(-level_); }

    DyadicPoint left() const { return endpoint(BigInt(index_)); }
    DyadicPoint right() const { return endpoint(BigInt(index_) + 1); }

    /// Left (I^-) and right (I^+) halves.
    std::pair<DyadicInterval, DyadicInterval> halves() const {
        if (index_ > (std::numeric_limits<std::uint64_t>::max() >> 1))
            throw std::overflow_error("DyadicInterval::halves: index overflow");
        return {{level_ + 1, 2 * index_}, {level_ + 1, 2 * index_ + 1}};
    }

    constexpr DyadicInterval parent() const noexcept { return {level_ - 1, index_ / 2}; }

    bool contains(const DyadicPoint& x) const { return x.floor_scaled(level_) == index_; }

    /// True when `inner` is a (non-strict) dyadic descendant of this interval.
    constexpr bool contains(const DyadicInterval& inner) const noexcept {
        if (inner.level_ < level_) return false;
        const auto depth = static_cast<std::uint32_t>(inner.level_ - level_);
        if (depth >= 64) return index_ == 0;
        return (inner.index_ >> depth) == index_;
    }

    friend constexpr bool operator==(const DyadicInterval&, const DyadicInterval&) = default;
    friend constexpr auto operator<=>(const DyadicInterval&, const DyadicInterval&) = default;

    std::string to_string() const { return "[" + left().to_string() + ", " + right().to_string() + ")"; }

private:
    DyadicPoint endpoint(const BigInt& n) const {
        if (level_ >= 0) return {n, static_cast<std::uint32_t>(level_)};
        return {BigInt(n << static_cast<unsigned>(-level_)), 0};
    }

    std::int32_t level_{0};
    std::uint64_t index_{0};
};

namespace detail {

// Both numerators rescaled to the larger of the two scales.
struct CommonScale {
    BigInt x, y;
    std::int64_t scale;
};

inline CommonScale common_scale(const DyadicPoint& x, const DyadicPoint& y) {
    const std::uint32_t s = std::max(x.scale(), y.scale());
    return {x.numerator() << (s - x.scale()), y.numerator() << (s - y.scale()), static_cast<std::int64_t>(s)};
}

}  // namespace detail

/// The smallest dyadic interval containing both x and y. Requires x != y.
inline DyadicInterval smallest_common(const DyadicPoint& x, const DyadicPoint& y) {
    if (x == y) throw std::invalid_argument("smallest_common: points coincide, no smallest interval exists");
    const auto c = detail::common_scale(x, y);
    // floor(x 2^j) == floor(y 2^j) iff the common prefix survives a right shift by s - j
    const std::int64_t t = detail::bit_length(BigInt(c.x ^ c.y));
    const std::int64_t level = c.scale - t;
    if (level < std::numeric_limits<std::int32_t>::min() || level > std::numeric_limits<std::int32_t>::max())
        throw std::overflow_error("smallest_common: level out of range");
    const BigInt index = c.x >> static_cast<unsigned>(t);
    if (detail::bit_length(index) > 64) throw std::overflow_error("smallest_common: interval index exceeds 64 bits");
    return {static_cast<std::int32_t>(level), index.convert_to<std::uint64_t>()};
}

/// Dyadic ultrametric: length of the smallest common dyadic interval, 0 on the diagonal.
inline DyadicScalar delta(const DyadicPoint& x, const DyadicPoint& y) {
    if (x == y) return {};
    const auto c = detail::common_scale(x, y);
    return DyadicScalar::power_of_two(detail::bit_length(BigInt(c.x ^ c.y)) - c.scale);
}

namespace detail {

inline BigInt parse_natural(std::string_view digits, std::string_view whole) {
    if (digits.empty()) throw std::invalid_argument("dyadic point '" + std::string(whole) + "': missing digits");
    for (char ch : digits)
        if (ch < '0' || ch > '9')
            throw std::invalid_argument("dyadic point '" + std::string(whole) + "': unexpected character '" +
                                        std::string(1, ch) + "'");
    // a leading 0 would make cpp_int read octal
    while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
    return BigInt(std::string(digits));
}

}  // namespace detail

/// Parses "n/2^p", "n/d" with d a power of two, integers, and exactly dyadic
/// decimals such as "0.375". Throws std::invalid_argument otherwise.
inline DyadicPoint parse_point(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
    if (text.empty()) throw std::invalid_argument("dyadic point: empty string");
    if (text.front() == '-') throw std::invalid_argument("dyadic point '" + std::string(text) + "': negative values are outside the half-line");
    if (text.front() == '+') text.remove_prefix(1);

    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const BigInt num = detail::parse_natural(text.substr(0, slash), text);
        std::string_view den = text.substr(slash + 1);
        if (den.starts_with("2^")) {
            const BigInt p = detail::parse_natural(den.substr(2), text);
            if (p > std::numeric_limits<std::uint32_t>::max())
                throw std::invalid_argument("dyadic point '" + std::string(text) + "': exponent too large");
            return {num, p.convert_to<std::uint32_t>()};
        }
        const BigInt d = detail::parse_natural(den, text);
        if (d.is_zero() || (d & (d - 1)) != 0)
            throw std::invalid_argument("dyadic point '" + std::string(text) + "': denominator is not a power of two");
        return {num, static_cast<std::uint32_t>(boost::multiprecision::msb(d))};
    }

    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view int_part = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        if (int_part.empty()) int_part = "0";
        if (frac.empty()) frac = "0";
        const BigInt whole = detail::parse_natural(int_part, text);
        const BigInt frac_digits = detail::parse_natural(frac, text);
        const auto d = static_cast<std::uint32_t>(frac.size());
        // value = (whole * 10^d + frac) / (2^d 5^d); dyadic iff 5^d divides the numerator
        BigInt five_pow = boost::multiprecision::pow(BigInt(5), d);
        BigInt ten_pow = boost::multiprecision::pow(BigInt(10), d);
        const BigInt num = whole * ten_pow + frac_digits;
        if (num % five_pow != 0)
            throw std::invalid_argument("dyadic point '" + std::string(text) + "': decimal is not a dyadic rational");
        return {BigInt(num / five_pow), d};
    }

    return {detail::parse_natural(text, text), 0};
}

}  // namespace haarlip
