#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bochner/grid.hpp"
#include "bochner/linalg.hpp"
#include "bochner/polynomial.hpp"
#include "bochner/spectral.hpp"

namespace bochner {

/// Inclusive integer range [lo, hi].
struct Window {
    long lo = 0;
    long hi = 0;

    long size() const { return hi >= lo ? hi - lo + 1 : 0; }
    bool contains(long s) const { return s >= lo && s <= hi; }
    friend bool operator==(const Window&, const Window&) = default;
};

/// A(s) and C(s) from (R1, R2) at one node:
///   A1 = (R2 - z(s-1) R1) / (z(s+1) - z(s-1)),  C1 = (z(s+1) R1 - R2) / (z(s+1) - z(s-1)),
///   A = A1 / (z(s+1) - z(s)),  C = -C1 / (z(s) - z(s-1)),
/// all R's evaluated at z(s). Throws WindowDegenerate when the three points are not distinct.
template <class T>
std::pair<T, T> synth_AC(const Field<T>& field, const GridForm<T>& grid, const Polynomial<T>& r1,
                         const Polynomial<T>& r2, long s);

struct IrreducibilityViolation {
    long s;        // A(s-1) C(s) = 0
    bool a_zero;   // A(s-1) = 0
    bool c_zero;   // C(s) = 0
};

template <class T>
struct DifferenceSystem {
    GridForm<T> grid;
    Polynomial<T> r1;
    Polynomial<T> r2;
    ConicParams<T> conic;
    SpectralSeq<T> spectrum;
    RSeq<T> rseq;
    Window requested;
    // Longest run of the requested window on which A(s-1) C(s) != 0 between
    // consecutive nodes; all verification is clamped to it.
    Window certified;
    std::vector<long> skipped_nodes;
    std::vector<IrreducibilityViolation> violations;

    T z(long s) const { return grid_eval(grid, s); }
    std::pair<T, T> AC(const Field<T>& field, long s) const { return synth_AC(field, grid, r1, r2, s); }
};

/**
 * Assembles the system on a grid: conic and (u, v), the R ladder up to
 * max(N + 1, 5), the spectrum from the leading coefficients of R1 and R2, and
 * the certified window. Throws IrreducibilityViolated when the ladder is
 * proportional or no two consecutive nodes of the window are coupled.
 */
template <class T>
DifferenceSystem<T> synthesize(const Field<T>& field, const GridForm<T>& grid, const Polynomial<T>& r1,
                               const Polynomial<T>& r2, int N, Window window);

/// A(s)[p(z(s+1)) - p(z(s))] - C(s)[p(z(s)) - p(z(s-1))].
template <class T>
T apply_operator(const Field<T>& field, const DifferenceSystem<T>& sys, const Polynomial<T>& p, long s);

/// Materialized coefficients at one node; verification reads only this table so
/// single entries can be perturbed.
template <class T>
struct NodeRow {
    long s;
    T zm, z, zp;
    T A, B, C;
};

template <class T>
struct NodeTable {
    std::vector<NodeRow<T>> rows;
    std::vector<long> skipped;
};

template <class T>
NodeTable<T> tabulate(const Field<T>& field, const DifferenceSystem<T>& sys, Window window);

/// Column k holds the monomial coefficients of L z^k, for k = 0..n.
/// Upper triangular with diagonal lambda_0..lambda_n on admissible systems.
template <class T>
Matrix<T> operator_matrix(const Field<T>& field, const DifferenceSystem<T>& sys, int n);

template <class T>
struct EigenPolySet {
    std::vector<Polynomial<T>> polys;
    std::vector<T> lambda;
};

template <class T>
EigenPolySet<T> build_eigenpolys(const Field<T>& field, const DifferenceSystem<T>& sys, int N);

/// (eq_Q) polynomial: (A Delta z^n - C Nabla z^n) / lambda_n interpolated over the window.
template <class T>
Polynomial<T> compute_Q(const Field<T>& field, const DifferenceSystem<T>& sys, int n, Window window);

struct NodeResidual {
    int n;
    long s;
    double residual;   // absolute
    double relative;   // residual / magnitude of the terms
};

struct VerifyReport {
    bool passed = true;
    double max_residual = 0.0;
    double max_relative = 0.0;
    std::vector<double> per_n;          // max relative eigen-equation residual per n
    std::vector<double> per_n_recursion;  // max relative R-ladder residual per n
    std::vector<NodeResidual> failures;
    std::vector<int> non_monic;
    double monic_deviation = 0.0;       // max |leading coefficient - 1|
    std::vector<long> skipped_nodes;
    Window window;
};

template <class T>
VerifyReport verify_table(const Field<T>& field, const NodeTable<T>& table, const EigenPolySet<T>& polys,
                          const RSeq<T>& rseq);

template <class T>
VerifyReport verify_system(const Field<T>& field, const DifferenceSystem<T>& sys, const EigenPolySet<T>& polys,
                           Window window);

struct MagnusReport {
    bool passed = false;
    double max_residual = 0.0;
    int degree = 0;
    int held_out = 0;
    std::string note;
};

/// Divided differences of p along the grid must interpolate as a polynomial of
/// degree <= deg p - 1 in the companion grid variable.
template <class T>
MagnusReport magnus_check(const Field<T>& field, const Polynomial<T>& p, const GridForm<T>& grid, Window window);

/// Same check on raw samples: z holds z(s0..s0+m), y holds y(s0..s0+m-1).
template <class T>
MagnusReport magnus_check(const Field<T>& field, const Polynomial<T>& p, const GridSamples<T>& z,
                          const GridSamples<T>& y);

}  // namespace bochner
