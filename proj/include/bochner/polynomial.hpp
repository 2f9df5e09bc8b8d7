#pragma once

#include <algorithm>
#include <initializer_list>
#include <utility>
#include <vector>

#include "bochner/error.hpp"
#include "bochner/scalar.hpp"

namespace bochner {

/**
 * Dense univariate polynomial, coefficients in ascending degree order.
 *
 * Exact zeros at the top are always stripped, so the zero polynomial has no
 * coefficients and degree -1. In float mode near-zero leading terms are removed
 * explicitly with clean(), which needs the field's tolerance.
 */
template <class T>
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<T> coeffs) : coeffs_(std::move(coeffs)) { strip(); }
    Polynomial(std::initializer_list<T> coeffs) : coeffs_(coeffs) { strip(); }

    static Polynomial constant(const T& c) { return Polynomial(std::vector<T>{c}); }

    static Polynomial monomial(int k, const T& c = ratio<T>(1)) {
        std::vector<T> v(static_cast<std::size_t>(k) + 1, ratio<T>(0));
        v.back() = c;
        return Polynomial(std::move(v));
    }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<T>& coeffs() const { return coeffs_; }

    T operator[](int k) const {
        if (k < 0 || k > degree()) return ratio<T>(0);
        return coeffs_[static_cast<std::size_t>(k)];
    }

    T leading() const { return coeffs_.empty() ? ratio<T>(0) : coeffs_.back(); }

    /// Horner evaluation.
    T operator()(const T& x) const {
        T acc = ratio<T>(0);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            acc *= x;
            acc += *it;
        }
        return acc;
    }

    Polynomial& operator+=(const Polynomial& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), ratio<T>(0));
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        strip();
        return *this;
    }

    Polynomial& operator-=(const Polynomial& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), ratio<T>(0));
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        strip();
        return *this;
    }

    Polynomial& operator*=(const T& c) {
        for (auto& x : coeffs_) x *= c;
        strip();
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const T& c) { return a *= c; }
    friend Polynomial operator*(const T& c, Polynomial a) { return a *= c; }
    friend Polynomial operator-(Polynomial a) {
        for (auto& x : a.coeffs_) x = -x;
        return a;
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<T> out(a.coeffs_.size() + b.coeffs_.size() - 1, ratio<T>(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
        return Polynomial(std::move(out));
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

    /// Largest coefficient magnitude; scale for float comparisons.
    double norm_inf() const {
        double m = 0.0;
        for (const auto& c : coeffs_) m = std::max(m, magnitude(c));
        return m;
    }

private:
    void strip() {
        while (!coeffs_.empty() && coeffs_.back() == ratio<T>(0)) coeffs_.pop_back();
    }

    std::vector<T> coeffs_;
};

/// Drop leading coefficients that are zero in the field (tolerance relative to the
/// largest coefficient in float mode).
template <class T>
Polynomial<T> clean(const Field<T>& field, const Polynomial<T>& p) {
    if constexpr (Field<T>::exact) {
        return p;
    } else {
        std::vector<T> c = p.coeffs();
        const double scale = p.norm_inf();
        for (auto& x : c) {
            if (field.is_zero(x, scale)) x = 0.0;
        }
        return Polynomial<T>(std::move(c));
    }
}

/// Coefficient-wise equality in the field.
template <class T>
bool poly_equal(const Field<T>& field, const Polynomial<T>& a, const Polynomial<T>& b) {
    const int n = std::max(a.degree(), b.degree());
    const double scale = std::max(a.norm_inf(), b.norm_inf());
    for (int k = 0; k <= n; ++k) {
        if (!field.is_zero(a[k] - b[k], scale)) return false;
    }
    return true;
}

template <class T>
T poly_eval(const Polynomial<T>& p, const T& x) {
    return p(x);
}

/// Euclidean division; the divisor must be nonzero. Exact in rational mode.
template <class T>
std::pair<Polynomial<T>, Polynomial<T>> poly_divmod(const Polynomial<T>& num, const Polynomial<T>& den) {
    if (den.is_zero()) throw Error(ErrorKind::PreconditionViolated, "division by the zero polynomial");
    std::vector<T> rem = num.coeffs();
    const int dd = den.degree();
    const int nd = num.degree();
    if (nd < dd) return {Polynomial<T>{}, num};
    std::vector<T> quo(static_cast<std::size_t>(nd - dd) + 1, ratio<T>(0));
    const T lead = den.leading();
    for (int k = nd - dd; k >= 0; --k) {
        T c = rem[static_cast<std::size_t>(k + dd)] / lead;
        quo[static_cast<std::size_t>(k)] = c;
        for (int j = 0; j <= dd; ++j) rem[static_cast<std::size_t>(k + j)] -= c * den[j];
        rem[static_cast<std::size_t>(k + dd)] = ratio<T>(0);
    }
    rem.resize(static_cast<std::size_t>(dd));
    return {Polynomial<T>(std::move(quo)), Polynomial<T>(std::move(rem))};
}

/// Monic greatest common divisor over the rationals.
inline Polynomial<Rational> poly_gcd(Polynomial<Rational> a, Polynomial<Rational> b) {
    while (!b.is_zero()) {
        auto r = poly_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    return a * Rational(1 / a.leading());
}

/// Unique interpolant of degree <= n-1 through n points (Newton divided differences).
template <class T>
Polynomial<T> poly_interpolate(const Field<T>& field, const std::vector<std::pair<T, T>>& points);

}  // namespace bochner
