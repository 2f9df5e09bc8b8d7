#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bochner/awoperator.hpp"
#include "bochner/polynomial.hpp"
#include "bochner/scalar.hpp"

namespace bochner {

/**
 * Finite tridiagonal data acting on functions of s = 0..N:
 *
 *   (J f)(s) = A(s) f(s+1) + B(s) f(s) + C(s) f(s-1),   C(0) = A(N) = 0.
 *
 * Eigenvectors of J are therefore solutions of the same three-point equation
 * the difference operator obeys on the grid, so v_k(s) = P_k(z(s)) up to scale.
 */
template <class T>
struct JacobiSystem {
    int N = 0;
    std::vector<T> a;  // A(0..N-1)
    std::vector<T> b;  // B(0..N)
    std::vector<T> c;  // C(1..N)

    T A(int i) const { return (i >= 0 && i < N) ? a[static_cast<std::size_t>(i)] : ratio<T>(0); }
    T B(int i) const { return (i >= 0 && i <= N) ? b[static_cast<std::size_t>(i)] : ratio<T>(0); }
    T C(int i) const { return (i >= 1 && i <= N) ? c[static_cast<std::size_t>(i - 1)] : ratio<T>(0); }
};

/// Throws PreconditionViolated if the vector lengths do not match N.
template <class T>
void validate(const JacobiSystem<T>& sys);

/// w_0 = 1, w_s = prod_{i=1..s} A(i-1) / C(i). Throws ZeroFactor if a factor vanishes.
template <class T>
std::vector<T> weights(const Field<T>& field, const JacobiSystem<T>& sys);

/// Y_0 = 1 and A(n) Y_{n+1} + B(n) Y_n + C(n) Y_{n-1} = x Y_n for n < N.
template <class T>
std::vector<Polynomial<T>> dual_polys(const Field<T>& field, const JacobiSystem<T>& sys);

/// (B(N) - x) Y_N + C(N) Y_{N-1}: its roots are the eigenvalues of J.
template <class T>
Polynomial<T> characteristic(const Field<T>& field, const JacobiSystem<T>& sys);

/// Forward recurrence v(0) = 1 in s at eigenvalue lambda; throws NotEigenvalue
/// when the closing s = N equation has a nonzero residual.
template <class T>
std::vector<T> eigenvectors_forward(const Field<T>& field, const JacobiSystem<T>& sys, const T& lambda);

struct PairResidual {
    int k;
    int j;
    double residual;
    double relative;
};

struct OrthogonalityReport {
    bool passed = true;
    int pairs_checked = 0;
    double max_relative = 0.0;
    std::vector<double> norms;  // diagonal sums, as doubles
    std::vector<PairResidual> failures;
};

/// sum_s w_s V[k][s] V[j][s] = 0 for every k != j.
template <class T>
OrthogonalityReport check_orthogonality(const Field<T>& field, const std::vector<std::vector<T>>& values,
                                        const std::vector<T>& w);

struct DualityReport {
    bool passed = true;
    int pairs_checked = 0;
    double max_relative = 0.0;
    std::vector<PairResidual> failures;  // (n, s)
};

/// P_n(z(s)) / P_n(z(0)) = Y_s(lambda_n) for all 0 <= n, s <= N.
template <class T>
DualityReport check_duality(const Field<T>& field, const std::vector<Polynomial<T>>& P,
                            const std::vector<Polynomial<T>>& Y, const std::vector<T>& z, const std::vector<T>& lambda);

template <class T>
struct RecurrenceReport {
    bool passed = false;
    std::vector<T> b;  // b_0..b_N
    std::vector<T> u;  // u_1..u_N (u[0] unused, zero)
    std::vector<double> norms;
    double max_residual = 0.0;
    Polynomial<T> p_next;          // P_{N+1}
    int vanishing_nodes = 0;       // count of s with P_{N+1}(z(s)) = 0
    bool all_u_nonzero = true;
    std::string note;
};

/// b_n = <x P_n, P_n> / h_n, u_n = h_n / h_{n-1}, with the weighted bilinear form
/// on the nodes z; throws NullNorm when some h_n = 0.
template <class T>
RecurrenceReport<T> recover_recurrence(const Field<T>& field, const std::vector<Polynomial<T>>& P,
                                       const std::vector<T>& w, const std::vector<T>& z);

struct BoundaryOverride {
    std::string coefficient;  // "A" or "C"
    long s;                   // original grid index
    std::string original;     // formatted original value
};

template <class T>
struct FiniteRestriction {
    JacobiSystem<T> jacobi;
    std::vector<T> z;  // z(lo), ..., z(lo + N)
    long lo = 0;
    std::vector<BoundaryOverride> overrides;
};

/// Nodes lo..lo+N reindexed to 0..N, with C(lo) and A(lo+N) set to zero.
template <class T>
FiniteRestriction<T> restrict_system(const Field<T>& field, const DifferenceSystem<T>& sys, long lo, int N);

template <class T>
struct DualSuiteReport {
    FiniteRestriction<T> restriction;
    EigenPolySet<T> eigen;
    std::vector<T> weights;
    OrthogonalityReport orthogonality;
    DualityReport duality;
    RecurrenceReport<T> recurrence;
    int closing_failures = 0;  // lambda_n that are not eigenvalues of the restricted matrix
    bool passed = false;
    std::string note;
};

/// Restriction, weights, biorthogonality, duality and recurrence recovery on one window.
template <class T>
DualSuiteReport<T> dual_suite(const Field<T>& field, const DifferenceSystem<T>& sys, long lo, int N,
                              std::optional<std::size_t> perturb_weight = std::nullopt);

}  // namespace bochner
