#include "bochner/awoperator.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "bochner/error.hpp"

namespace bochner {

namespace {

constexpr std::size_t kMaxReportedFailures = 64;
constexpr int kHeldOutNodes = 2;

template <class T>
Polynomial<T> monomial(int k) {
    return Polynomial<T>::monomial(k);
}

template <class T>
double term_scale(std::initializer_list<T> terms) {
    double s = 0.0;
    for (const auto& t : terms) s += magnitude(t);
    return s;
}

template <class T>
bool residual_ok(const Field<T>& field, const T& residual, double scale) {
    return field.is_zero(residual, scale);
}

template <class T>
bool contains_value(const Field<T>& field, const std::vector<T>& values, const T& x) {
    return std::any_of(values.begin(), values.end(), [&](const T& v) { return field.equal(v, x); });
}

// Nodes from `from` upward where the operator is defined and z(s) is new.
template <class T>
std::vector<long> pick_nodes(const Field<T>& field, const DifferenceSystem<T>& sys, long from, std::size_t count) {
    std::vector<long> nodes;
    std::vector<T> zs;
    const long limit = from + 64 + 8 * static_cast<long>(count);
    for (long s = from; nodes.size() < count && s < limit; ++s) {
        try {
            (void)sys.AC(field, s);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::WindowDegenerate) continue;
            throw;
        }
        T z = sys.z(s);
        if (contains_value(field, zs, z)) continue;
        zs.push_back(z);
        nodes.push_back(s);
    }
    if (nodes.size() < count) {
        throw Error(ErrorKind::PreconditionViolated,
                    "could not find " + std::to_string(count) + " admissible nodes from s = " + std::to_string(from));
    }
    return nodes;
}

}  // namespace

template <class T>
std::pair<T, T> synth_AC(const Field<T>& field, const GridForm<T>& grid, const Polynomial<T>& r1,
                         const Polynomial<T>& r2, long s) {
    const T zm = grid_eval(grid, s - 1);
    const T z = grid_eval(grid, s);
    const T zp = grid_eval(grid, s + 1);
    if (field.equal(zp, zm) || field.equal(zp, z) || field.equal(z, zm)) {
        throw Error(ErrorKind::WindowDegenerate, "z(s-1), z(s), z(s+1) not distinct at s = " + std::to_string(s));
    }
    const T R1 = r1(z);
    const T R2 = r2(z);
    const T width = zp - zm;
    const T A1 = (R2 - zm * R1) / width;
    const T C1 = (zp * R1 - R2) / width;
    return {A1 / (zp - z), -C1 / (z - zm)};
}

template <class T>
DifferenceSystem<T> synthesize(const Field<T>& field, const GridForm<T>& grid, const Polynomial<T>& r1,
                               const Polynomial<T>& r2, int N, Window window) {
    if (N < 0) throw Error(ErrorKind::PreconditionViolated, "N must be >= 0");
    if (window.size() == 0) throw Error(ErrorKind::PreconditionViolated, "empty window");
    if (grid.has_modulus() &&
        (field.is_zero(grid.q) || field.equal(grid.q, ratio<T>(1)) || field.equal(grid.q, ratio<T>(-1)))) {
        throw Error(ErrorKind::PreconditionViolated, "q must avoid 0, 1 and -1");
    }

    DifferenceSystem<T> sys;
    sys.grid = grid;
    sys.r1 = clean(field, r1);
    sys.r2 = clean(field, r2);
    sys.conic = conic_of(grid);
    sys.requested = window;
    sys.rseq = build_R_sequence(field, sys.r1, sys.r2, uv_from_conic(sys.conic), std::max(N + 1, 5));
    (void)uv_from_R(field, sys.rseq[2], sys.rseq[3], sys.rseq[4], sys.rseq[5]);
    sys.spectrum = omega_closed_form(field, sys.conic.xi, sys.r1.leading(), sys.r2.leading(), N);

    std::map<long, std::pair<T, T>> ac;
    for (long s = window.lo; s <= window.hi; ++s) {
        try {
            ac.emplace(s, sys.AC(field, s));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::WindowDegenerate) throw;
            sys.skipped_nodes.push_back(s);
        }
    }
    if (ac.empty()) throw Error(ErrorKind::IrreducibilityViolated, "every node of the window is degenerate");

    auto vanishes = [&](const T& x, const std::pair<T, T>& row) {
        return field.is_zero(x, magnitude(row.first) + magnitude(row.second));
    };
    Window best{ac.begin()->first, ac.begin()->first};
    Window run = best;
    for (long s = window.lo + 1; s <= window.hi; ++s) {
        auto prev = ac.find(s - 1);
        auto cur = ac.find(s);
        bool linked = false;
        if (prev != ac.end() && cur != ac.end()) {
            const bool a_zero = vanishes(prev->second.first, prev->second);
            const bool c_zero = vanishes(cur->second.second, cur->second);
            linked = !a_zero && !c_zero;
            if (!linked) sys.violations.push_back({s, a_zero, c_zero});
        }
        if (linked) {
            run.hi = s;
        } else if (cur != ac.end()) {
            run = {s, s};
        }
        if (run.size() > best.size()) best = run;
    }
    if (window.size() >= 2 && best.size() < 2) {
        throw Error(ErrorKind::IrreducibilityViolated, "A(s-1) C(s) vanishes between every pair of window nodes");
    }
    sys.certified = best;
    return sys;
}

template <class T>
T apply_operator(const Field<T>& field, const DifferenceSystem<T>& sys, const Polynomial<T>& p, long s) {
    const auto [A, C] = sys.AC(field, s);
    const T pm = p(sys.z(s - 1));
    const T p0 = p(sys.z(s));
    const T pp = p(sys.z(s + 1));
    return A * (pp - p0) - C * (p0 - pm);
}

template <class T>
NodeTable<T> tabulate(const Field<T>& field, const DifferenceSystem<T>& sys, Window window) {
    NodeTable<T> table;
    for (long s = window.lo; s <= window.hi; ++s) {
        std::pair<T, T> ac;
        try {
            ac = sys.AC(field, s);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::WindowDegenerate) throw;
            table.skipped.push_back(s);
            continue;
        }
        NodeRow<T> row{s, sys.z(s - 1), sys.z(s), sys.z(s + 1), ac.first, ratio<T>(0), ac.second};
        row.B = -row.A - row.C;
        table.rows.push_back(std::move(row));
    }
    return table;
}

template <class T>
Matrix<T> operator_matrix(const Field<T>& field, const DifferenceSystem<T>& sys, int n) {
    if (n < 0) throw Error(ErrorKind::PreconditionViolated, "n must be >= 0");
    const auto size = static_cast<std::size_t>(n) + 1;
    const auto nodes = pick_nodes(field, sys, sys.certified.lo, size + kHeldOutNodes);
    Matrix<T> m(size, std::vector<T>(size, ratio<T>(0)));
    for (int k = 0; k <= n; ++k) {
        const auto zk = monomial<T>(k);
        std::vector<std::pair<T, T>> pts;
        std::vector<std::pair<T, T>> held;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            auto pt = std::make_pair(sys.z(nodes[i]), apply_operator(field, sys, zk, nodes[i]));
            (i < size ? pts : held).push_back(std::move(pt));
        }
        const auto poly = poly_interpolate(field, pts);
        double scale = poly.norm_inf();
        for (const auto& [x, y] : held) {
            const T r = poly(x) - y;
            if (!field.is_zero(r, std::max(scale, magnitude(y)))) {
                throw Error(ErrorKind::NotTriangular,
                            "L z^" + std::to_string(k) + " is not a polynomial in z on the sampled nodes");
            }
        }
        for (int row = 0; row <= n; ++row) {
            const T c = poly[row];
            if (row > k) {
                if (!field.is_zero(c, scale)) {
                    throw Error(ErrorKind::NotTriangular, "L z^" + std::to_string(k) + " has a z^" +
                                                              std::to_string(row) + " component");
                }
                continue;
            }
            m[static_cast<std::size_t>(row)][static_cast<std::size_t>(k)] = c;
        }
    }
    return m;
}

template <class T>
EigenPolySet<T> build_eigenpolys(const Field<T>& field, const DifferenceSystem<T>& sys, int N) {
    const auto m = operator_matrix(field, sys, N);
    EigenPolySet<T> out;
    for (int n = 0; n <= N; ++n) out.lambda.push_back(m[static_cast<std::size_t>(n)][static_cast<std::size_t>(n)]);
    for (int n = 0; n <= N; ++n) {
        const T& ln = out.lambda[static_cast<std::size_t>(n)];
        std::vector<T> c(static_cast<std::size_t>(n) + 1, ratio<T>(0));
        c[static_cast<std::size_t>(n)] = ratio<T>(1);
        for (int k = n - 1; k >= 0; --k) {
            const auto ku = static_cast<std::size_t>(k);
            T acc = ratio<T>(0);
            for (int j = k + 1; j <= n; ++j) acc += m[ku][static_cast<std::size_t>(j)] * c[static_cast<std::size_t>(j)];
            const T denom = m[ku][ku] - ln;
            if (field.is_zero(denom, std::max(magnitude(m[ku][ku]), magnitude(ln)))) {
                throw Error(ErrorKind::SpectrumDegenerate,
                            "lambda_" + std::to_string(k) + " = lambda_" + std::to_string(n));
            }
            c[ku] = -acc / denom;
        }
        out.polys.push_back(Polynomial<T>(std::move(c)));
    }
    return out;
}

template <class T>
Polynomial<T> compute_Q(const Field<T>& field, const DifferenceSystem<T>& sys, int n, Window window) {
    if (n < 0) throw Error(ErrorKind::PreconditionViolated, "n must be >= 0");
    if (n == 0) return Polynomial<T>::constant(ratio<T>(1));
    if (n > sys.spectrum.n_max()) throw Error(ErrorKind::PreconditionViolated, "n beyond the materialized spectrum");
    const T& ln = sys.spectrum.lambda[static_cast<std::size_t>(n)];
    if (field.is_zero(ln)) throw Error(ErrorKind::SpectrumDegenerate, "lambda_" + std::to_string(n) + " = 0");

    const auto zn = monomial<T>(n);
    std::vector<std::pair<T, T>> pts;
    std::vector<T> zs;
    for (long s = window.lo; s <= window.hi; ++s) {
        T value;
        try {
            value = apply_operator(field, sys, zn, s) / ln;
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::WindowDegenerate) continue;
            throw;
        }
        T z = sys.z(s);
        if (contains_value(field, zs, z)) continue;
        zs.push_back(z);
        pts.emplace_back(std::move(z), std::move(value));
    }
    const auto need = static_cast<std::size_t>(n) + 1;
    if (pts.size() < need) {
        throw Error(ErrorKind::PreconditionViolated, "window has fewer than " + std::to_string(need) + " usable nodes");
    }
    const auto q = poly_interpolate(field, std::vector<std::pair<T, T>>(pts.begin(), pts.begin() + need));
    const double scale = q.norm_inf();
    for (std::size_t i = need; i < pts.size(); ++i) {
        if (!field.is_zero(q(pts[i].first) - pts[i].second, std::max(scale, magnitude(pts[i].second)))) {
            throw Error(ErrorKind::NotPolynomial, "held-out node breaks the degree-" + std::to_string(n) + " fit");
        }
    }
    const auto cq = clean(field, q);
    if (cq.degree() != n || !field.equal(cq.leading(), ratio<T>(1))) {
        throw Error(ErrorKind::NotPolynomial, "Q_" + std::to_string(n) + " is not monic of degree " + std::to_string(n));
    }
    return cq;
}

template <class T>
VerifyReport verify_table(const Field<T>& field, const NodeTable<T>& table, const EigenPolySet<T>& polys,
                          const RSeq<T>& rseq) {
    VerifyReport rep;
    rep.skipped_nodes = table.skipped;
    const int N = static_cast<int>(polys.polys.size()) - 1;
    rep.per_n.assign(static_cast<std::size_t>(N + 1), 0.0);
    rep.per_n_recursion.assign(static_cast<std::size_t>(N + 1), 0.0);
    if (!table.rows.empty()) rep.window = {table.rows.front().s, table.rows.back().s};

    auto record = [&](int n, long s, const T& residual, double scale, std::vector<double>& per_n) {
        const double abs_r = magnitude(residual);
        const double rel = scale > 0.0 ? abs_r / scale : abs_r;
        rep.max_residual = std::max(rep.max_residual, abs_r);
        rep.max_relative = std::max(rep.max_relative, rel);
        auto& slot = per_n[static_cast<std::size_t>(n)];
        slot = std::max(slot, rel);
        if (!residual_ok(field, residual, scale)) {
            rep.passed = false;
            if (rep.failures.size() < kMaxReportedFailures) rep.failures.push_back({n, s, abs_r, rel});
        }
    };

    for (int n = 0; n <= N; ++n) {
        const auto& p = polys.polys[static_cast<std::size_t>(n)];
        const T lead = p.degree() == n ? p.leading() : ratio<T>(0);
        rep.monic_deviation = std::max(rep.monic_deviation, magnitude(T(lead - ratio<T>(1))));
        if (p.degree() != n || !field.equal(lead, ratio<T>(1))) {
            rep.passed = false;
            rep.non_monic.push_back(n);
        }
    }

    for (const auto& row : table.rows) {
        for (int n = 0; n <= N; ++n) {
            const auto& p = polys.polys[static_cast<std::size_t>(n)];
            const T& ln = polys.lambda[static_cast<std::size_t>(n)];
            const T tp = row.A * p(row.zp);
            const T t0 = row.B * p(row.z);
            const T tm = row.C * p(row.zm);
            const T tl = ln * p(row.z);
            record(n, row.s, T(tp + t0 + tm - tl), term_scale<T>({tp, t0, tm, tl}), rep.per_n);

            if (n + 1 <= rseq.n_max()) {
                const T A1 = row.A * (row.zp - row.z);
                const T C1 = -(row.C * (row.z - row.zm));
                const T ta = A1 * ipow(row.zp, n);
                const T tc = C1 * ipow(row.zm, n);
                const T tr = rseq[n + 1](row.z);
                record(n, row.s, T(ta + tc - tr), term_scale<T>({ta, tc, tr}), rep.per_n_recursion);
            }
        }
    }
    return rep;
}

template <class T>
VerifyReport verify_system(const Field<T>& field, const DifferenceSystem<T>& sys, const EigenPolySet<T>& polys,
                           Window window) {
    Window w{std::max(window.lo, sys.certified.lo), std::min(window.hi, sys.certified.hi)};
    if (w.size() == 0) throw Error(ErrorKind::PreconditionViolated, "window does not meet the certified window");
    const auto table = tabulate(field, sys, w);
    auto rep = verify_table(field, table, polys, sys.rseq);
    rep.window = w;
    return rep;
}

template <class T>
MagnusReport magnus_check(const Field<T>& field, const Polynomial<T>& p, const GridSamples<T>& z,
                          const GridSamples<T>& y) {
    MagnusReport rep;
    const auto cp = clean(field, p);
    const int n = cp.degree();
    rep.degree = n;
    if (n < 1) throw Error(ErrorKind::PreconditionViolated, "magnus_check needs deg p >= 1");
    if (z.s0 != y.s0 || z.size() != y.size() + 1) {
        throw Error(ErrorKind::PreconditionViolated, "companion samples must cover z(s0..s0+m-1)");
    }
    const std::size_t m = y.size();
    if (m < static_cast<std::size_t>(n) + 1) {
        throw Error(ErrorKind::PreconditionViolated, "window needs >= " + std::to_string(n + 1) + " nodes");
    }
    std::vector<std::pair<T, T>> pts;
    for (std::size_t i = 0; i < m; ++i) {
        const T dz = z.values[i + 1] - z.values[i];
        if (field.is_zero(dz, magnitude(z.values[i]))) {
            rep.note = "z(s+1) = z(s) at s = " + std::to_string(z.s_at(i));
            return rep;
        }
        pts.emplace_back(y.values[i], T((cp(z.values[i + 1]) - cp(z.values[i])) / dz));
    }
    Polynomial<T> t;
    try {
        t = poly_interpolate(field, std::vector<std::pair<T, T>>(pts.begin(), pts.begin() + n));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::DuplicateAbscissa) throw;
        rep.note = "companion grid repeats a value";
        return rep;
    }
    rep.passed = true;
    const double scale = t.norm_inf();
    for (std::size_t i = static_cast<std::size_t>(n); i < m; ++i) {
        const T r = t(pts[i].first) - pts[i].second;
        rep.max_residual = std::max(rep.max_residual, magnitude(r));
        ++rep.held_out;
        if (!field.is_zero(r, std::max(scale, magnitude(pts[i].second)))) rep.passed = false;
    }
    return rep;
}

template <class T>
MagnusReport magnus_check(const Field<T>& field, const Polynomial<T>& p, const GridForm<T>& grid, Window window) {
    if (grid.family == GridFamily::AltQuadratic) {
        MagnusReport rep;
        rep.degree = p.degree();
        rep.note = "alternating grids have no half-step companion grid";
        return rep;
    }
    GridSamples<T> z{window.lo, {}};
    GridSamples<T> y{window.lo, {}};
    for (long s = window.lo; s <= window.hi; ++s) {
        z.values.push_back(grid_eval(grid, s));
        y.values.push_back(companion_eval(grid, s));
    }
    z.values.push_back(grid_eval(grid, window.hi + 1));
    return magnus_check(field, p, z, y);
}

#define BOCHNER_INSTANTIATE_AW(T)                                                                                  \
    template std::pair<T, T> synth_AC(const Field<T>&, const GridForm<T>&, const Polynomial<T>&,                   \
                                      const Polynomial<T>&, long);                                                 \
    template DifferenceSystem<T> synthesize(const Field<T>&, const GridForm<T>&, const Polynomial<T>&,             \
                                            const Polynomial<T>&, int, Window);                                    \
    template T apply_operator(const Field<T>&, const DifferenceSystem<T>&, const Polynomial<T>&, long);            \
    template NodeTable<T> tabulate(const Field<T>&, const DifferenceSystem<T>&, Window);                           \
    template Matrix<T> operator_matrix(const Field<T>&, const DifferenceSystem<T>&, int);                          \
    template EigenPolySet<T> build_eigenpolys(const Field<T>&, const DifferenceSystem<T>&, int);                   \
    template Polynomial<T> compute_Q(const Field<T>&, const DifferenceSystem<T>&, int, Window);                    \
    template VerifyReport verify_table(const Field<T>&, const NodeTable<T>&, const EigenPolySet<T>&,               \
                                       const RSeq<T>&);                                                            \
    template VerifyReport verify_system(const Field<T>&, const DifferenceSystem<T>&, const EigenPolySet<T>&,       \
                                        Window);                                                                   \
    template MagnusReport magnus_check(const Field<T>&, const Polynomial<T>&, const GridSamples<T>&,               \
                                       const GridSamples<T>&);                                                     \
    template MagnusReport magnus_check(const Field<T>&, const Polynomial<T>&, const GridForm<T>&, Window);

BOCHNER_INSTANTIATE_AW(Rational)
BOCHNER_INSTANTIATE_AW(double)

}  // namespace bochner
