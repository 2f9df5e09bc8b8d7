#include "bochner/duality.hpp"

#include <algorithm>

#include "bochner/error.hpp"

namespace bochner {

namespace {

constexpr std::size_t kMaxReportedFailures = 64;

template <class T>
double relative_to(const T& residual, double scale) {
    const double r = magnitude(residual);
    return scale > 0.0 ? r / scale : r;
}

// Magnitude scale for evaluating p at x: sum_k |c_k| |x|^k.
template <class T>
double eval_scale(const Polynomial<T>& p, const T& x) {
    double acc = 0.0;
    const double ax = magnitude(x);
    for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) acc = acc * ax + magnitude(*it);
    return acc;
}

}  // namespace

template <class T>
void validate(const JacobiSystem<T>& sys) {
    const auto n = static_cast<std::size_t>(sys.N);
    if (sys.N < 0 || sys.a.size() != n || sys.b.size() != n + 1 || sys.c.size() != n) {
        throw Error(ErrorKind::PreconditionViolated, "Jacobi data needs N entries of A and C and N + 1 of B");
    }
}

template <class T>
std::vector<T> weights(const Field<T>& field, const JacobiSystem<T>& sys) {
    validate(sys);
    std::vector<T> w{ratio<T>(1)};
    for (int s = 1; s <= sys.N; ++s) {
        const T a = sys.A(s - 1);
        const T c = sys.C(s);
        if (field.is_zero(a, magnitude(c))) throw Error(ErrorKind::ZeroFactor, "A(" + std::to_string(s - 1) + ") = 0");
        if (field.is_zero(c, magnitude(a))) throw Error(ErrorKind::ZeroFactor, "C(" + std::to_string(s) + ") = 0");
        w.push_back(w.back() * a / c);
    }
    return w;
}

template <class T>
std::vector<Polynomial<T>> dual_polys(const Field<T>& field, const JacobiSystem<T>& sys) {
    validate(sys);
    const Polynomial<T> x = Polynomial<T>::monomial(1);
    std::vector<Polynomial<T>> Y{Polynomial<T>::constant(ratio<T>(1))};
    for (int n = 0; n < sys.N; ++n) {
        const T a = sys.A(n);
        if (field.is_zero(a, magnitude(sys.B(n)) + magnitude(sys.C(n)))) {
            throw Error(ErrorKind::ZeroFactor, "A(" + std::to_string(n) + ") = 0");
        }
        auto next = (x - Polynomial<T>::constant(sys.B(n))) * Y.back();
        if (n >= 1) next -= Y[static_cast<std::size_t>(n - 1)] * sys.C(n);
        next *= ratio<T>(1) / a;
        Y.push_back(std::move(next));
    }
    return Y;
}

template <class T>
Polynomial<T> characteristic(const Field<T>& field, const JacobiSystem<T>& sys) {
    const auto Y = dual_polys(field, sys);
    const Polynomial<T> x = Polynomial<T>::monomial(1);
    auto out = (Polynomial<T>::constant(sys.B(sys.N)) - x) * Y.back();
    if (sys.N >= 1) out += Y[static_cast<std::size_t>(sys.N - 1)] * sys.C(sys.N);
    return out;
}

template <class T>
std::vector<T> eigenvectors_forward(const Field<T>& field, const JacobiSystem<T>& sys, const T& lambda) {
    validate(sys);
    std::vector<T> v{ratio<T>(1)};
    for (int s = 0; s < sys.N; ++s) {
        const T a = sys.A(s);
        if (field.is_zero(a, magnitude(sys.B(s)) + magnitude(sys.C(s)))) {
            throw Error(ErrorKind::ZeroFactor, "A(" + std::to_string(s) + ") = 0");
        }
        T next = (lambda - sys.B(s)) * v.back();
        if (s >= 1) next -= sys.C(s) * v[static_cast<std::size_t>(s - 1)];
        v.push_back(next / a);
    }
    const int N = sys.N;
    const T tb = sys.B(N) * v.back();
    const T tc = N >= 1 ? T(sys.C(N) * v[static_cast<std::size_t>(N - 1)]) : ratio<T>(0);
    const T tl = lambda * v.back();
    const T residual = tb + tc - tl;
    if (!field.is_zero(residual, magnitude(tb) + magnitude(tc) + magnitude(tl))) {
        throw Error(ErrorKind::NotEigenvalue, "closing equation leaves residual " + format_scalar(residual));
    }
    return v;
}

template <class T>
OrthogonalityReport check_orthogonality(const Field<T>& field, const std::vector<std::vector<T>>& values,
                                        const std::vector<T>& w) {
    OrthogonalityReport rep;
    const int K = static_cast<int>(values.size());
    for (const auto& row : values) {
        if (row.size() != w.size()) throw Error(ErrorKind::PreconditionViolated, "value rows must match weights");
    }
    auto product = [&](int k, int j, double& scale) {
        T acc = ratio<T>(0);
        scale = 0.0;
        for (std::size_t s = 0; s < w.size(); ++s) {
            const T term = w[s] * values[static_cast<std::size_t>(k)][s] * values[static_cast<std::size_t>(j)][s];
            scale += magnitude(term);
            acc += term;
        }
        return acc;
    };
    for (int k = 0; k < K; ++k) {
        double scale = 0.0;
        rep.norms.push_back(to_double(product(k, k, scale)));
    }
    for (int k = 0; k < K; ++k) {
        for (int j = k + 1; j < K; ++j) {
            double scale = 0.0;
            const T r = product(k, j, scale);
            const double rel = relative_to(r, scale);
            ++rep.pairs_checked;
            rep.max_relative = std::max(rep.max_relative, rel);
            if (!field.is_zero(r, scale)) {
                rep.passed = false;
                if (rep.failures.size() < kMaxReportedFailures) rep.failures.push_back({k, j, magnitude(r), rel});
            }
        }
    }
    return rep;
}

template <class T>
DualityReport check_duality(const Field<T>& field, const std::vector<Polynomial<T>>& P,
                            const std::vector<Polynomial<T>>& Y, const std::vector<T>& z, const std::vector<T>& lambda) {
    DualityReport rep;
    const std::size_t size = z.size();
    if (P.size() != size || Y.size() != size || lambda.size() != size) {
        throw Error(ErrorKind::PreconditionViolated, "P, Y, z and lambda must all have N + 1 entries");
    }
    for (std::size_t n = 0; n < size; ++n) {
        const T p0 = P[n](z[0]);
        for (std::size_t s = 0; s < size; ++s) {
            ++rep.pairs_checked;
            const T rhs = Y[s](lambda[n]);
            if (field.is_zero(p0, eval_scale(P[n], z[0]))) {
                rep.passed = false;
                rep.max_relative = std::max(rep.max_relative, 1.0);
                if (rep.failures.size() < kMaxReportedFailures) {
                    rep.failures.push_back({static_cast<int>(n), static_cast<int>(s), 1.0, 1.0});
                }
                continue;
            }
            const T lhs = P[n](z[s]) / p0;
            const T r = lhs - rhs;
            const double scale = std::max({1.0, magnitude(lhs), magnitude(rhs)});
            const double rel = relative_to(r, scale);
            rep.max_relative = std::max(rep.max_relative, rel);
            if (!field.equal(lhs, rhs)) {
                rep.passed = false;
                if (rep.failures.size() < kMaxReportedFailures) {
                    rep.failures.push_back({static_cast<int>(n), static_cast<int>(s), magnitude(r), rel});
                }
            }
        }
    }
    return rep;
}

template <class T>
RecurrenceReport<T> recover_recurrence(const Field<T>& field, const std::vector<Polynomial<T>>& P,
                                       const std::vector<T>& w, const std::vector<T>& z) {
    RecurrenceReport<T> rep;
    const int N = static_cast<int>(P.size()) - 1;
    if (N < 0 || w.size() != z.size()) throw Error(ErrorKind::PreconditionViolated, "recover_recurrence needs P_0 and matching w, z");
    std::vector<T> h;
    for (int n = 0; n <= N; ++n) {
        const auto& p = P[static_cast<std::size_t>(n)];
        T hn = ratio<T>(0), xn = ratio<T>(0);
        double scale = 0.0;
        for (std::size_t s = 0; s < z.size(); ++s) {
            const T pv = p(z[s]);
            const T term = w[s] * pv * pv;
            scale += magnitude(term);
            hn += term;
            xn += term * z[s];
        }
        if (field.is_zero(hn, scale)) throw Error(ErrorKind::NullNorm, "h_" + std::to_string(n) + " = 0");
        rep.norms.push_back(to_double(hn));
        rep.b.push_back(xn / hn);
        rep.u.push_back(n == 0 ? ratio<T>(0) : T(hn / h.back()));
        if (n >= 1 && field.is_zero(rep.u.back())) rep.all_u_nonzero = false;
        h.push_back(std::move(hn));
    }

    const Polynomial<T> x = Polynomial<T>::monomial(1);
    auto step = [&](int n) {
        auto next = (x - Polynomial<T>::constant(rep.b[static_cast<std::size_t>(n)])) * P[static_cast<std::size_t>(n)];
        if (n >= 1) next -= P[static_cast<std::size_t>(n - 1)] * rep.u[static_cast<std::size_t>(n)];
        return next;
    };
    bool residual_ok = true;
    for (int n = 0; n < N; ++n) {
        const auto predicted = step(n);
        const auto& actual = P[static_cast<std::size_t>(n + 1)];
        const double scale = std::max(predicted.norm_inf(), actual.norm_inf());
        const auto diff = predicted - actual;
        rep.max_residual = std::max(rep.max_residual, scale > 0.0 ? diff.norm_inf() / scale : diff.norm_inf());
        if (!poly_equal(field, predicted, actual)) residual_ok = false;
    }
    rep.p_next = clean(field, step(N));
    for (const auto& zs : z) {
        if (field.is_zero(rep.p_next(zs), eval_scale(rep.p_next, zs))) ++rep.vanishing_nodes;
    }
    rep.passed = residual_ok && rep.all_u_nonzero && rep.vanishing_nodes == static_cast<int>(z.size());
    if (!residual_ok) rep.note = "three-term recurrence does not reproduce P_{n+1}";
    else if (!rep.all_u_nonzero) rep.note = "some u_n vanishes";
    else if (!rep.passed) rep.note = "P_{N+1} does not vanish on every node";
    return rep;
}

template <class T>
FiniteRestriction<T> restrict_system(const Field<T>& field, const DifferenceSystem<T>& sys, long lo, int N) {
    if (N < 0) throw Error(ErrorKind::PreconditionViolated, "N must be >= 0");
    FiniteRestriction<T> out;
    out.lo = lo;
    auto& J = out.jacobi;
    J.N = N;
    for (int i = 0; i <= N; ++i) {
        const long s = lo + i;
        const auto [A, C] = sys.AC(field, s);
        out.z.push_back(sys.z(s));
        J.b.push_back(-A - C);
        if (i < N) {
            J.a.push_back(A);
        } else if (!field.is_zero(A)) {
            out.overrides.push_back({"A", s, format_scalar(A)});
        }
        if (i >= 1) {
            J.c.push_back(C);
        } else if (!field.is_zero(C)) {
            out.overrides.push_back({"C", s, format_scalar(C)});
        }
    }
    return out;
}

template <class T>
DualSuiteReport<T> dual_suite(const Field<T>& field, const DifferenceSystem<T>& sys, long lo, int N,
                              std::optional<std::size_t> perturb_weight) {
    DualSuiteReport<T> rep;
    rep.restriction = restrict_system(field, sys, lo, N);
    rep.eigen = build_eigenpolys(field, sys, N);
    rep.weights = weights(field, rep.restriction.jacobi);
    if (perturb_weight && *perturb_weight < rep.weights.size()) {
        rep.weights[*perturb_weight] *= ratio<T>(1000001, 1000000);
    }
    const auto& z = rep.restriction.z;

    std::vector<std::vector<T>> values;
    for (const auto& p : rep.eigen.polys) {
        std::vector<T> row;
        for (const auto& zs : z) row.push_back(p(zs));
        values.push_back(std::move(row));
    }
    rep.orthogonality = check_orthogonality(field, values, rep.weights);

    const auto Y = dual_polys(field, rep.restriction.jacobi);
    rep.duality = check_duality(field, rep.eigen.polys, Y, z, rep.eigen.lambda);

    try {
        rep.recurrence = recover_recurrence(field, rep.eigen.polys, rep.weights, z);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NullNorm) throw;
        rep.recurrence.passed = false;
        rep.recurrence.note = e.what();
    }

    for (const auto& ln : rep.eigen.lambda) {
        try {
            (void)eigenvectors_forward(field, rep.restriction.jacobi, ln);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NotEigenvalue) throw;
            ++rep.closing_failures;
        }
    }

    rep.passed = rep.orthogonality.passed && rep.duality.passed && rep.recurrence.passed;
    if (!rep.passed) {
        std::vector<std::string> parts;
        if (!rep.orthogonality.passed) parts.emplace_back("orthogonality");
        if (!rep.duality.passed) parts.emplace_back("duality");
        if (!rep.recurrence.passed) parts.emplace_back("recurrence");
        rep.note = "failed:";
        for (const auto& p : parts) rep.note += " " + p;
    }
    return rep;
}

#define BOCHNER_INSTANTIATE_DUALITY(T)                                                                             \
    template void validate(const JacobiSystem<T>&);                                                                \
    template std::vector<T> weights(const Field<T>&, const JacobiSystem<T>&);                                      \
    template std::vector<Polynomial<T>> dual_polys(const Field<T>&, const JacobiSystem<T>&);                       \
    template Polynomial<T> characteristic(const Field<T>&, const JacobiSystem<T>&);                                \
    template std::vector<T> eigenvectors_forward(const Field<T>&, const JacobiSystem<T>&, const T&);               \
    template OrthogonalityReport check_orthogonality(const Field<T>&, const std::vector<std::vector<T>>&,          \
                                                     const std::vector<T>&);                                       \
    template DualityReport check_duality(const Field<T>&, const std::vector<Polynomial<T>>&,                       \
                                         const std::vector<Polynomial<T>>&, const std::vector<T>&,                 \
                                         const std::vector<T>&);                                                   \
    template RecurrenceReport<T> recover_recurrence(const Field<T>&, const std::vector<Polynomial<T>>&,            \
                                                    const std::vector<T>&, const std::vector<T>&);                 \
    template FiniteRestriction<T> restrict_system(const Field<T>&, const DifferenceSystem<T>&, long, int);         \
    template DualSuiteReport<T> dual_suite(const Field<T>&, const DifferenceSystem<T>&, long, int,                 \
                                           std::optional<std::size_t>);

BOCHNER_INSTANTIATE_DUALITY(Rational)
BOCHNER_INSTANTIATE_DUALITY(double)

}  // namespace bochner
