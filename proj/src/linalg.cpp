#include "bochner/linalg.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "bochner/error.hpp"
#include "bochner/polynomial.hpp"

namespace bochner {

namespace {

void require_rectangular(const auto& m) {
    if (m.empty() || m.front().empty()) throw Error(ErrorKind::PreconditionViolated, "empty matrix");
    for (const auto& row : m) {
        if (row.size() != m.front().size()) throw Error(ErrorKind::PreconditionViolated, "ragged matrix");
    }
}

template <class T>
void normalize_first_nonzero(const Field<T>& field, std::vector<T>& v) {
    double scale = 0.0;
    for (const auto& x : v) scale = std::max(scale, magnitude(x));
    for (auto& x : v) {
        if (field.is_zero(x, scale)) x = ratio<T>(0);
    }
    for (const auto& x : v) {
        if (x != ratio<T>(0)) {
            const T lead = x;
            for (auto& y : v) y /= lead;
            return;
        }
    }
}

std::vector<Rational> nullspace_exact(const Matrix<Rational>& m) {
    const std::size_t rows = m.size();
    const std::size_t cols = m.front().size();

    // Clear denominators row by row.
    std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        mpz_class l = 1;
        for (const auto& x : m[i]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
        for (std::size_t j = 0; j < cols; ++j) a[i][j] = m[i][j].get_num() * (l / m[i][j].get_den());
    }

    // Fraction-free echelon form; every division below is exact.
    std::vector<std::size_t> pivot_cols;
    mpz_class prev = 1;
    std::size_t prow = 0;
    for (std::size_t col = 0; col < cols && prow < rows; ++col) {
        std::size_t sel = prow;
        while (sel < rows && sgn(a[sel][col]) == 0) ++sel;
        if (sel == rows) continue;
        std::swap(a[sel], a[prow]);
        for (std::size_t i = prow + 1; i < rows; ++i) {
            for (std::size_t j = col + 1; j < cols; ++j) {
                mpz_class t = a[prow][col] * a[i][j] - a[i][col] * a[prow][j];
                mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            a[i][col] = 0;
        }
        prev = a[prow][col];
        pivot_cols.push_back(col);
        ++prow;
    }

    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_cols) is_pivot[c] = true;
    std::size_t free_col = cols;
    for (std::size_t j = 0; j < cols; ++j) {
        if (!is_pivot[j]) {
            free_col = j;
            break;
        }
    }
    if (free_col == cols) throw Error(ErrorKind::FullRank, "matrix has full column rank");

    std::vector<Rational> v(cols, Rational(0));
    v[free_col] = 1;
    for (std::size_t k = pivot_cols.size(); k-- > 0;) {
        const std::size_t pc = pivot_cols[k];
        Rational acc = 0;
        for (std::size_t j = pc + 1; j < cols; ++j) {
            if (sgn(v[j]) != 0) acc += Rational(a[k][j]) * v[j];
        }
        v[pc] = -acc / Rational(a[k][pc]);
    }
    normalize_first_nonzero(Field<Rational>{}, v);
    return v;
}

std::vector<double> nullspace_float(const Field<double>& field, const Matrix<double>& m) {
    const std::size_t rows = m.size();
    const std::size_t cols = m.front().size();
    Matrix<double> a = m;
    for (auto& row : a) {
        double mx = 0.0;
        for (double x : row) mx = std::max(mx, std::abs(x));
        if (mx > 0.0) {
            for (double& x : row) x /= mx;
        }
    }

    std::vector<std::size_t> perm(cols);
    std::iota(perm.begin(), perm.end(), 0);
    std::size_t rank = 0;
    for (; rank < std::min(rows, cols); ++rank) {
        std::size_t bi = rank, bj = rank;
        double best = 0.0;
        for (std::size_t i = rank; i < rows; ++i) {
            for (std::size_t j = rank; j < cols; ++j) {
                if (std::abs(a[i][j]) > best) {
                    best = std::abs(a[i][j]);
                    bi = i;
                    bj = j;
                }
            }
        }
        if (field.is_zero(best)) break;
        std::swap(a[bi], a[rank]);
        if (bj != rank) {
            for (auto& row : a) std::swap(row[bj], row[rank]);
            std::swap(perm[bj], perm[rank]);
        }
        for (std::size_t i = rank + 1; i < rows; ++i) {
            const double f = a[i][rank] / a[rank][rank];
            if (f == 0.0) continue;
            for (std::size_t j = rank; j < cols; ++j) a[i][j] -= f * a[rank][j];
        }
    }
    if (rank >= cols) throw Error(ErrorKind::FullRank, "matrix has full column rank at the working tolerance");

    // Free variable: the non-pivot column with the smallest original index.
    std::size_t free_pos = rank;
    for (std::size_t k = rank; k < cols; ++k) {
        if (perm[k] < perm[free_pos]) free_pos = k;
    }
    std::vector<double> y(cols, 0.0);
    y[free_pos] = 1.0;
    for (std::size_t k = rank; k-- > 0;) {
        double acc = 0.0;
        for (std::size_t j = k + 1; j < cols; ++j) acc += a[k][j] * y[j];
        y[k] = -acc / a[k][k];
    }
    std::vector<double> v(cols, 0.0);
    for (std::size_t k = 0; k < cols; ++k) v[perm[k]] = y[k];
    normalize_first_nonzero(field, v);

    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    for (const auto& row : m) {
        double dot = 0.0, l1 = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            dot += row[j] * v[j];
            l1 += std::abs(row[j]);
        }
        if (!field.is_zero(dot, l1 * vmax)) {
            throw Error(ErrorKind::FullRank, "candidate nullspace vector fails a row check");
        }
    }
    return v;
}

std::vector<Rational> solve_exact(const Matrix<Rational>& m, const std::vector<Rational>& rhs) {
    const std::size_t rows = m.size();
    const std::size_t cols = m.front().size();
    Matrix<Rational> a(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        a[i] = m[i];
        a[i].push_back(rhs[i]);
    }
    std::size_t prow = 0;
    for (std::size_t col = 0; col < cols; ++col) {
        std::size_t sel = prow;
        while (sel < rows && sgn(a[sel][col]) == 0) ++sel;
        if (sel == rows) throw Error(ErrorKind::Underdetermined, "column " + std::to_string(col) + " is dependent");
        std::swap(a[sel], a[prow]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == prow || sgn(a[i][col]) == 0) continue;
            const Rational f = a[i][col] / a[prow][col];
            for (std::size_t j = col; j <= cols; ++j) a[i][j] -= f * a[prow][j];
        }
        ++prow;
    }
    for (std::size_t i = prow; i < rows; ++i) {
        if (sgn(a[i][cols]) != 0) throw Error(ErrorKind::Inconsistent, "row " + std::to_string(i) + " is violated");
    }
    std::vector<Rational> x(cols);
    for (std::size_t k = 0; k < cols; ++k) {
        x[k] = a[k][cols] / a[k][k];
        x[k].canonicalize();
    }
    return x;
}

std::vector<double> solve_float(const Field<double>& field, const Matrix<double>& m, const std::vector<double>& rhs,
                                const std::vector<double>* rhs_scale) {
    const std::size_t rows = m.size();
    const std::size_t cols = m.front().size();
    if (rows < cols) throw Error(ErrorKind::Underdetermined, "fewer rows than unknowns");

    // Rows are weighted by their own magnitude so small equations are not
    // swamped by large ones, then columns are equilibrated.
    std::vector<double> rscale(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        double s = std::max(std::abs(rhs[i]), rhs_scale ? (*rhs_scale)[i] : 0.0);
        for (std::size_t j = 0; j < cols; ++j) s = std::max(s, std::abs(m[i][j]));
        rscale[i] = s > 0.0 ? s : 1.0;
    }
    std::vector<double> cscale(cols, 0.0);
    for (std::size_t j = 0; j < cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows; ++i) s += (m[i][j] / rscale[i]) * (m[i][j] / rscale[i]);
        cscale[j] = std::sqrt(s);
        if (cscale[j] == 0.0) throw Error(ErrorKind::Underdetermined, "zero column " + std::to_string(j));
    }
    Matrix<double> a(rows, std::vector<double>(cols));
    std::vector<double> b(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) a[i][j] = m[i][j] / rscale[i] / cscale[j];
        b[i] = rhs[i] / rscale[i];
    }

    // Householder QR applied in place to a and b.
    for (std::size_t k = 0; k < cols; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < rows; ++i) norm += a[i][k] * a[i][k];
        norm = std::sqrt(norm);
        if (field.is_zero(norm)) throw Error(ErrorKind::Underdetermined, "columns are dependent at the working tolerance");
        const double alpha = a[k][k] > 0 ? -norm : norm;
        std::vector<double> v(rows - k);
        for (std::size_t i = k; i < rows; ++i) v[i - k] = a[i][k];
        v[0] -= alpha;
        double vv = 0.0;
        for (double x : v) vv += x * x;
        if (vv == 0.0) continue;
        for (std::size_t j = k; j < cols; ++j) {
            double d = 0.0;
            for (std::size_t i = k; i < rows; ++i) d += v[i - k] * a[i][j];
            d = 2.0 * d / vv;
            for (std::size_t i = k; i < rows; ++i) a[i][j] -= d * v[i - k];
        }
        double d = 0.0;
        for (std::size_t i = k; i < rows; ++i) d += v[i - k] * b[i];
        d = 2.0 * d / vv;
        for (std::size_t i = k; i < rows; ++i) b[i] -= d * v[i - k];
    }
    std::vector<double> x(cols, 0.0);
    for (std::size_t k = cols; k-- > 0;) {
        double acc = b[k];
        for (std::size_t j = k + 1; j < cols; ++j) acc -= a[k][j] * x[j];
        x[k] = acc / a[k][k];
    }
    for (std::size_t j = 0; j < cols; ++j) x[j] /= cscale[j];

    for (std::size_t i = 0; i < rows; ++i) {
        double lhs = 0.0, scale = std::abs(rhs[i]) + (rhs_scale ? (*rhs_scale)[i] : 0.0);
        for (std::size_t j = 0; j < cols; ++j) {
            lhs += m[i][j] * x[j];
            scale += std::abs(m[i][j] * x[j]);
        }
        if (!field.is_zero(lhs - rhs[i], scale)) {
            throw Error(ErrorKind::Inconsistent, "row " + std::to_string(i) + " residual exceeds tolerance");
        }
    }
    return x;
}

}  // namespace

template <class T>
std::vector<T> nullspace_vector(const Field<T>& field, const Matrix<T>& m) {
    require_rectangular(m);
    if constexpr (Field<T>::exact) {
        (void)field;
        return nullspace_exact(m);
    } else {
        return nullspace_float(field, m);
    }
}

namespace {

template <class T>
std::vector<T> solve_dispatch(const Field<T>& field, const Matrix<T>& m, const std::vector<T>& rhs,
                              const std::vector<double>* rhs_scale) {
    require_rectangular(m);
    if (rhs.size() != m.size()) throw Error(ErrorKind::PreconditionViolated, "rhs length mismatch");
    if (rhs_scale && rhs_scale->size() != m.size()) {
        throw Error(ErrorKind::PreconditionViolated, "rhs scale length mismatch");
    }
    if constexpr (Field<T>::exact) {
        (void)field;
        return solve_exact(m, rhs);
    } else {
        return solve_float(field, m, rhs, rhs_scale);
    }
}

}  // namespace

template <class T>
std::vector<T> solve_consistent(const Field<T>& field, const Matrix<T>& m, const std::vector<T>& rhs) {
    return solve_dispatch(field, m, rhs, nullptr);
}

template <class T>
std::vector<T> solve_consistent(const Field<T>& field, const Matrix<T>& m, const std::vector<T>& rhs,
                                const std::vector<double>& rhs_scale) {
    return solve_dispatch(field, m, rhs, &rhs_scale);
}

template <class T>
T max_row_residual(const Matrix<T>& m, const std::vector<T>& v) {
    T worst = ratio<T>(0);
    for (const auto& row : m) {
        T dot = ratio<T>(0);
        for (std::size_t j = 0; j < row.size() && j < v.size(); ++j) dot += row[j] * v[j];
        T a = abs_value(dot);
        if (a > worst) worst = a;
    }
    return worst;
}

template <class T>
Polynomial<T> poly_interpolate(const Field<T>& field, const std::vector<std::pair<T, T>>& points) {
    const std::size_t n = points.size();
    if (n == 0) throw Error(ErrorKind::PreconditionViolated, "interpolation needs at least one point");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (field.equal(points[i].first, points[j].first)) {
                throw Error(ErrorKind::DuplicateAbscissa,
                            "abscissae " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
            }
        }
    }
    std::vector<T> dd(n);
    for (std::size_t i = 0; i < n; ++i) dd[i] = points[i].second;
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t i = n - 1; i >= level; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / (points[i].first - points[i - level].first);
        }
    }
    Polynomial<T> p = Polynomial<T>::constant(dd[n - 1]);
    for (std::size_t k = n - 1; k-- > 0;) {
        p = p * Polynomial<T>{-points[k].first, ratio<T>(1)} + Polynomial<T>::constant(dd[k]);
    }
    return p;
}

template std::vector<Rational> nullspace_vector(const Field<Rational>&, const Matrix<Rational>&);
template std::vector<double> nullspace_vector(const Field<double>&, const Matrix<double>&);
template std::vector<Rational> solve_consistent(const Field<Rational>&, const Matrix<Rational>&, const std::vector<Rational>&);
template std::vector<double> solve_consistent(const Field<double>&, const Matrix<double>&, const std::vector<double>&);
template std::vector<Rational> solve_consistent(const Field<Rational>&, const Matrix<Rational>&,
                                                const std::vector<Rational>&, const std::vector<double>&);
template std::vector<double> solve_consistent(const Field<double>&, const Matrix<double>&, const std::vector<double>&,
                                              const std::vector<double>&);
template Rational max_row_residual(const Matrix<Rational>&, const std::vector<Rational>&);
template double max_row_residual(const Matrix<double>&, const std::vector<double>&);
template Polynomial<Rational> poly_interpolate(const Field<Rational>&, const std::vector<std::pair<Rational, Rational>>&);
template Polynomial<double> poly_interpolate(const Field<double>&, const std::vector<std::pair<double, double>>&);

}  // namespace bochner
