#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace bochner {

using Rational = mpq_class;

/// Relative tolerance with an absolute floor, used only by the float field.
struct Tolerance {
    double rel = 1e-10;
    double abs_floor = 1e-14;
};

/**
 * Arithmetic context. A run picks one field (exact rationals or doubles) and
 * every algorithm is instantiated for that field alone, so the two modes never
 * mix. Zero tests and equality go through the field: literal for rationals,
 * tolerance based for doubles.
 */
template <class T>
struct Field;

template <>
struct Field<Rational> {
    static constexpr bool exact = true;
    static constexpr std::string_view name = "rational";

    bool is_zero(const Rational& x, double /*scale*/ = 1.0) const { return sgn(x) == 0; }
    bool equal(const Rational& a, const Rational& b) const { return a == b; }
    double threshold(double /*scale*/) const { return 0.0; }
};

template <>
struct Field<double> {
    static constexpr bool exact = false;
    static constexpr std::string_view name = "float";

    Tolerance tol;

    Field() = default;
    explicit Field(Tolerance t) : tol(t) {}
    explicit Field(double rel) { tol.rel = rel; }

    // |x| <= tol * max(1, scale), never below the absolute floor.
    double threshold(double scale) const {
        return std::max(tol.rel * std::max(1.0, scale), tol.abs_floor);
    }
    bool is_zero(double x, double scale = 1.0) const { return std::abs(x) <= threshold(scale); }
    bool equal(double a, double b) const {
        return is_zero(a - b, std::max(std::abs(a), std::abs(b)));
    }
};

inline double to_double(const Rational& x) { return x.get_d(); }
inline double to_double(double x) { return x; }

inline double magnitude(const Rational& x) { return std::abs(x.get_d()); }
inline double magnitude(double x) { return std::abs(x); }

inline Rational abs_value(const Rational& x) { return Rational(abs(x)); }
inline double abs_value(double x) { return std::abs(x); }

inline bool is_negative(const Rational& x) { return sgn(x) < 0; }
inline bool is_negative(double x) { return x < 0.0; }

/// p/q in the requested field.
template <class T>
T ratio(long p, long q = 1) {
    if constexpr (std::is_same_v<T, Rational>) {
        Rational r(p, q);
        r.canonicalize();
        return r;
    } else {
        return static_cast<double>(p) / static_cast<double>(q);
    }
}

/// Integer power, negative exponents allowed (base must then be nonzero).
template <class T>
T ipow(const T& base, long e) {
    T result = ratio<T>(1);
    T b = base;
    unsigned long n = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    while (n != 0) {
        if (n & 1UL) result *= b;
        b *= b;
        n >>= 1;
    }
    if (e < 0) result = ratio<T>(1) / result;
    return result;
}

/// Exact square root of a rational when it exists.
std::optional<Rational> exact_sqrt(const Rational& x);

/// "p/q" or "p" for rationals; shortest round-trip decimal for doubles.
std::string format_scalar(const Rational& x);
std::string format_scalar(double x);

/// Accepts "p/q", integers, and decimal or exponent literals ("2.5", "1e-3").
/// Decimal literals are converted exactly in rational mode.
template <class T>
T parse_scalar(std::string_view text);

}  // namespace bochner
