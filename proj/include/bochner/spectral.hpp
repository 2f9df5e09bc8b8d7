#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bochner/grid.hpp"
#include "bochner/polynomial.hpp"
#include "bochner/scalar.hpp"

namespace bochner {

/**
 * Closed-form regime of omega_{n+2} + xi omega_{n+1} + omega_n = 0.
 *
 *   QType        omega_n = G1 q^n + G2 q^-n   (r^2 + xi r + 1 = 0 has roots q, 1/q)
 *   Linear       omega_n = G1 n + G0          (xi = -2)
 *   Alternating  omega_n = (-1)^n (G1 n + G0) (xi = +2)
 *
 * In float mode with |xi| < 2 the q-type roots lie on the unit circle and the
 * sequence is stored as G1 cos(n theta) + G2 sin(n theta) instead.
 */
enum class OmegaRegime { QType, Linear, Alternating };

std::string_view to_string(OmegaRegime r);

template <class T>
struct SpectralSeq {
    T xi = ratio<T>(0);
    OmegaRegime regime = OmegaRegime::Linear;
    T q = ratio<T>(1);
    bool trigonometric = false;
    double theta = 0.0;
    T g0 = ratio<T>(0);
    T g1 = ratio<T>(0);
    T g2 = ratio<T>(0);
    // omega[0] is a placeholder zero; omega[n] for 1 <= n <= n_max.
    std::vector<T> omega;
    // lambda[0] = 0, lambda[n] = lambda[n-1] + omega[n].
    std::vector<T> lambda;

    int n_max() const { return static_cast<int>(lambda.size()) - 1; }
};

/// Closed-form omega_n for the regime stored in seq (valid for any n >= 1).
template <class T>
T omega_closed(const SpectralSeq<T>& seq, long n);

template <class T>
SpectralSeq<T> omega_closed_form(const Field<T>& field, const T& xi, const T& omega1, const T& omega2, int n_max);

/// The first pair (n, m), n < m <= n_max, with lambda_n = lambda_m, if any.
template <class T>
std::optional<std::pair<int, int>> find_lambda_collision(const Field<T>& field, const std::vector<T>& lambda);

/// v = -xi x - eta, u = x^2 + eta x + zeta.
template <class T>
struct UVPair {
    Polynomial<T> v;
    Polynomial<T> u;
};

template <class T>
UVPair<T> uv_from_conic(const ConicParams<T>& c);

/// Conic parameters of a closed-form grid (exact, no sampling).
template <class T>
ConicParams<T> conic_of(const GridForm<T>& form);

template <class T>
struct RSeq {
    // polys[0] is unused (zero); polys[n] = R_n for 1 <= n <= n_max.
    std::vector<Polynomial<T>> polys;
    UVPair<T> uv;

    const Polynomial<T>& operator[](int n) const { return polys[static_cast<std::size_t>(n)]; }
    int n_max() const { return static_cast<int>(polys.size()) - 1; }
};

/// R_{n+2} = v R_{n+1} - u R_n, checking deg R_n = n at every step.
template <class T>
RSeq<T> build_R_sequence(const Field<T>& field, const Polynomial<T>& r1, const Polynomial<T>& r2, const UVPair<T>& uv,
                         int n_max);

/**
 * Solves R4 = v R3 - u R2, R5 = v R4 - u R3 for (u, v):
 *   pi6 = R3^2 - R2 R4,  pi7 = R4 R3 - R2 R5,  pi8 = R3 R5 - R4^2,
 *   v = pi7 / pi6,  u = -pi8 / pi6.
 * The quotients are reduced (exact gcd in rational mode, residual-checked
 * division in float mode); u_poly / v_poly are set when they reduce to
 * polynomials.
 */
template <class T>
struct UVRational {
    Polynomial<T> pi6;
    Polynomial<T> pi7;
    Polynomial<T> pi8;
    Polynomial<T> u_num, u_den;
    Polynomial<T> v_num, v_den;
    std::optional<Polynomial<T>> u_poly;
    std::optional<Polynomial<T>> v_poly;
};

template <class T>
UVRational<T> uv_from_R(const Field<T>& field, const Polynomial<T>& r2, const Polynomial<T>& r3,
                        const Polynomial<T>& r4, const Polynomial<T>& r5);

/// Y_0 = 0, Y_1 = 1, Y_{n+1} = v Y_n - u Y_{n-1}.
template <class T>
T compute_Y(const T& u, const T& v, int n);

/// (zp^n - zm^n) / (zp - zm).
template <class T>
T compute_Y_direct(const Field<T>& field, const T& zm, const T& zp, int n);

/// Polynomial in the symbols u, v with integer coefficients.
struct UVPoly {
    // (power of u, power of v) -> coefficient
    std::map<std::pair<int, int>, long> terms;

    std::string to_string() const;
    friend bool operator==(const UVPoly&, const UVPoly&) = default;
};

UVPoly compute_Y_symbolic(int n);

}  // namespace bochner
