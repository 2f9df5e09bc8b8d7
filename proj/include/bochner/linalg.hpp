#pragma once

#include <vector>

#include "bochner/scalar.hpp"

namespace bochner {

template <class T>
using Matrix = std::vector<std::vector<T>>;

/**
 * One nonzero vector v with m * v = 0, normalized so its first nonzero entry
 * is one. Rational mode clears denominators and eliminates fraction-free
 * (Bareiss); float mode uses full pivoting with tolerance-based rank decisions.
 * Throws FullRank when the nullspace is trivial.
 */
template <class T>
std::vector<T> nullspace_vector(const Field<T>& field, const Matrix<T>& m);

/**
 * Solution of an overdetermined but consistent system m * x = rhs. Rational
 * mode eliminates exactly; float mode solves least squares by Householder QR
 * and then checks every row residual against the tolerance. Throws
 * Underdetermined if the columns are dependent and Inconsistent if some row
 * is violated.
 */
template <class T>
std::vector<T> solve_consistent(const Field<T>& field, const Matrix<T>& m, const std::vector<T>& rhs);

/// As above; rhs_scale[i] is the magnitude of the terms that were cancelled to
/// form rhs[i], and widens the float consistency check for that row.
template <class T>
std::vector<T> solve_consistent(const Field<T>& field, const Matrix<T>& m, const std::vector<T>& rhs,
                                const std::vector<double>& rhs_scale);

/// max_i |row_i . v| (absolute), handy for residual reporting.
template <class T>
T max_row_residual(const Matrix<T>& m, const std::vector<T>& v);

}  // namespace bochner
