#pragma once

// Independent reference computations used only by the tests. Nothing here calls
// into the algorithms it is meant to check.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "bochner/awoperator.hpp"
#include "bochner/duality.hpp"
#include "bochner/grid.hpp"
#include "bochner/scalar.hpp"

namespace oracle {

using bochner::Rational;

inline Rational q(long p, long d = 1) {
    Rational r(p, d);
    r.canonicalize();
    return r;
}

inline Rational pow_q(const Rational& b, long e) {
    Rational r = 1;
    for (long i = 0; i < (e < 0 ? -e : e); ++i) r *= b;
    return e < 0 ? Rational(1 / r) : r;
}

// Linear-grid worked system z = s, R1 = x, R2 = 2x^2.
inline Rational linear_A(long s) { return q(s * (s + 1), 2); }
inline Rational linear_C(long s) { return q(s * (s - 1), 2); }
inline Rational linear_B(long s) { return q(-s * s); }
inline Rational linear_lambda(long n) { return q(n * (n + 1), 2); }

// q = 2 system z = 2^s + 2^-s, R1 = x, R2 = (5/2) x^2.
inline Rational qsys_lambda(long n) { return q(2, 3) * (pow_q(2, n + 1) + pow_q(2, -n) - 3); }

// Plain three-term recurrence for omega with lambda partial sums.
inline void omega_recurrence(const Rational& xi, const Rational& w1, const Rational& w2, int n_max,
                             std::vector<Rational>& omega, std::vector<Rational>& lambda) {
    omega.assign(static_cast<std::size_t>(std::max(n_max, 2)) + 1, Rational(0));
    omega[1] = w1;
    omega[2] = w2;
    for (int n = 3; n <= n_max; ++n) omega[n] = -xi * omega[n - 1] - omega[n - 2];
    omega.resize(static_cast<std::size_t>(n_max) + 1);
    lambda.assign(1, Rational(0));
    for (int n = 1; n <= n_max; ++n) lambda.push_back(lambda.back() + omega[n]);
}

inline bool has_collision(const std::vector<Rational>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            if (v[i] == v[j]) return true;
    return false;
}

// Naive Gauss-Jordan for a square nonsingular rational system.
inline std::vector<Rational> solve_square(std::vector<std::vector<Rational>> m, std::vector<Rational> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (m[p][c] == 0) ++p;
        std::swap(m[p], m[c]);
        std::swap(b[p], b[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || m[r][c] == 0) continue;
            Rational f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
            b[r] -= f * b[c];
        }
    }
    for (std::size_t i = 0; i < n; ++i) b[i] /= m[i][i];
    return b;
}

// Monomial coefficients of a polynomial through the points, via a Vandermonde solve.
inline std::vector<Rational> vandermonde_fit(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
    std::vector<std::vector<Rational>> m;
    for (const auto& x : xs) {
        std::vector<Rational> row;
        Rational p = 1;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            row.push_back(p);
            p *= x;
        }
        m.push_back(row);
    }
    return solve_square(m, ys);
}

inline Rational eval(const std::vector<Rational>& c, const Rational& x) {
    Rational acc = 0, p = 1;
    for (const auto& a : c) {
        acc += a * p;
        p *= x;
    }
    return acc;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen_); }

    Rational rational(long num_bound = 9, long den_bound = 5) {
        return q(integer(-num_bound, num_bound), integer(1, den_bound));
    }

    Rational nonzero(long num_bound = 9, long den_bound = 5) {
        Rational r;
        do r = rational(num_bound, den_bound);
        while (r == 0);
        return r;
    }

    // |q| > 1, numerator up to `top`.
    Rational modulus(long top = 5) {
        long a = integer(2, top);
        long b = integer(1, a - 1);
        Rational r = q(a, b);
        return integer(0, 1) ? r : Rational(-r);
    }

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

inline bochner::GridForm<Rational> random_form(Rng& rng, bochner::GridFamily family) {
    using F = bochner::GridForm<Rational>;
    switch (family) {
        case bochner::GridFamily::QQuadratic:
            return F::qquadratic(rng.nonzero(), rng.nonzero(), rng.rational(), rng.modulus());
        case bochner::GridFamily::Quadratic: return F::quadratic(rng.nonzero(), rng.rational(), rng.rational());
        case bochner::GridFamily::AltQuadratic: return F::alt_quadratic(rng.rational(), rng.nonzero(), rng.rational());
        case bochner::GridFamily::Linear: return F::linear(rng.nonzero(), rng.rational());
        case bochner::GridFamily::Exponential: {
            Rational m = rng.modulus();
            if (rng.integer(0, 1)) m = 1 / m;
            return F::exponential(rng.nonzero(), rng.rational(), m);
        }
    }
    return F::linear(1, 0);
}

inline bochner::GridForm<double> to_double(const bochner::GridForm<Rational>& f) {
    return {f.family, f.c0.get_d(), f.c1.get_d(), f.c2.get_d(), f.q.get_d()};
}

/**
 * System whose window lo..lo+N is closed at both ends by the coefficients
 * themselves: R2 is chosen so that C(lo) = 0 and A(lo+N) = 0. Returns nullopt
 * when the draw is unusable (degenerate spectrum, interior zeros, ...).
 */
struct Truncated {
    bochner::GridForm<Rational> grid;
    bochner::Polynomial<Rational> r1, r2;
    long lo;
    int N;
};

inline std::optional<Truncated> natural_truncation(const bochner::GridForm<Rational>& grid, const Rational& a,
                                                   const Rational& b, const Rational& c, long lo, int N) {
    auto z = [&](long s) { return bochner::grid_eval(grid, s); };
    const Rational z0 = z(lo), zN = z(lo + N);
    if (z0 == zN) return std::nullopt;
    auto R1 = [&](const Rational& x) { return Rational(a * x + b); };
    // c x^2 + d x + e = rhs at x = z0 and x = zN.
    const Rational rhs0 = z(lo + 1) * R1(z0) - c * z0 * z0;
    const Rational rhsN = z(lo + N - 1) * R1(zN) - c * zN * zN;
    auto de = solve_square({{z0, 1}, {zN, 1}}, {rhs0, rhsN});
    Truncated t{grid, bochner::Polynomial<Rational>{b, a}, bochner::Polynomial<Rational>{de[1], de[0], c}, lo, N};
    return t;
}

/**
 * Generic Jacobi data with known spectrum: monic orthogonal polynomials of a
 * random discrete measure (nodes x_k, masses sigma_k) give B(n) = beta_n,
 * A(n) = 1, C(n) = gamma_n; a random diagonal similarity then scrambles A and C.
 */
struct GenericJacobi {
    bochner::JacobiSystem<Rational> sys;
    std::vector<Rational> nodes;
};

inline std::optional<GenericJacobi> stieltjes_system(Rng& rng, int N) {
    std::vector<Rational> x, sigma;
    while (static_cast<int>(x.size()) <= N) {
        Rational v = rng.rational(12, 4);
        bool fresh = true;
        for (const auto& y : x) fresh = fresh && y != v;
        if (fresh) x.push_back(v);
    }
    for (int k = 0; k <= N; ++k) sigma.push_back(rng.nonzero(6, 3));

    // T_n evaluated at the nodes.
    std::vector<Rational> prev(x.size(), Rational(0)), cur(x.size(), Rational(1));
    std::vector<Rational> beta, gamma;
    Rational h_prev = 0;
    for (int n = 0; n <= N; ++n) {
        Rational h = 0, xh = 0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            h += sigma[k] * cur[k] * cur[k];
            xh += sigma[k] * x[k] * cur[k] * cur[k];
        }
        if (h == 0) return std::nullopt;
        beta.push_back(xh / h);
        gamma.push_back(n == 0 ? Rational(0) : Rational(h / h_prev));
        if (n > 0 && gamma.back() == 0) return std::nullopt;
        std::vector<Rational> next(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) next[k] = (x[k] - beta.back()) * cur[k] - gamma.back() * prev[k];
        prev = cur;
        cur = next;
        h_prev = h;
    }
    GenericJacobi g;
    g.nodes = x;
    g.sys.N = N;
    std::vector<Rational> d;
    for (int s = 0; s <= N; ++s) d.push_back(rng.nonzero(5, 3));
    for (int s = 0; s <= N; ++s) {
        g.sys.b.push_back(beta[static_cast<std::size_t>(s)]);
        if (s < N) g.sys.a.push_back(d[s] / d[s + 1]);
        if (s >= 1) g.sys.c.push_back(gamma[static_cast<std::size_t>(s)] * d[s] / d[s - 1]);
    }
    return g;
}

}  // namespace oracle
