#include "bochner/grid.hpp"

#include <algorithm>

#include "bochner/error.hpp"
#include "bochner/linalg.hpp"

namespace bochner {

std::string_view to_string(GridFamily f) {
    switch (f) {
        case GridFamily::QQuadratic: return "QQuadratic";
        case GridFamily::Quadratic: return "Quadratic";
        case GridFamily::AltQuadratic: return "AltQuadratic";
        case GridFamily::Linear: return "Linear";
        case GridFamily::Exponential: return "Exponential";
    }
    return "Unknown";
}

std::optional<GridFamily> grid_family_from_string(std::string_view name) {
    for (auto f : {GridFamily::QQuadratic, GridFamily::Quadratic, GridFamily::AltQuadratic, GridFamily::Linear,
                   GridFamily::Exponential}) {
        if (to_string(f) == name) return f;
    }
    return std::nullopt;
}

std::string_view to_string(ClassifyStage stage) {
    return stage == ClassifyStage::Conic ? "conic" : "family-fit";
}

template <class T>
T BiQuadraticCurve<T>::operator()(const T& x, const T& y) const {
    return alpha[0] * x * x * y * y + alpha[1] * x * y * (x + y) + alpha[2] * (x * x + y * y) + alpha[3] * x * y +
           alpha[4] * (x + y) + alpha[5];
}

namespace {

template <class T>
T alt_sign(long s) {
    return (s % 2 == 0) ? ratio<T>(1) : ratio<T>(-1);
}

template <class T>
void require_samples(const GridSamples<T>& samples, std::size_t minimum, std::string_view what) {
    if (samples.size() < minimum) {
        throw Error(ErrorKind::PreconditionViolated, std::string(what) + " needs >= " + std::to_string(minimum) +
                                                         " samples, got " + std::to_string(samples.size()));
    }
}

template <class T>
bool abs_less(const T& a, const T& b) {
    return abs_value(a) < abs_value(b);
}

template <class T>
bool reproduces(const Field<T>& field, const GridForm<T>& form, const GridSamples<T>& samples) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!field.equal(grid_eval(form, samples.s_at(i)), samples.values[i])) return false;
    }
    return true;
}

template <class T>
std::optional<T> select_modulus(const Field<T>& field, const T& xi) {
    // Roots of r^2 + xi r + 1 = 0; report the one with |r| > 1.
    const T disc = xi * xi - ratio<T>(4);
    if constexpr (Field<T>::exact) {
        (void)field;
        auto root = exact_sqrt(disc);
        if (!root) return std::nullopt;
        T r1 = (-xi + *root) / ratio<T>(2);
        T r2 = (-xi - *root) / ratio<T>(2);
        return abs_less(r1, r2) ? r2 : r1;
    } else {
        (void)field;
        if (disc < 0.0) return std::nullopt;
        const double root = std::sqrt(disc);
        const double r1 = (-xi + root) / 2.0;
        const double r2 = (-xi - root) / 2.0;
        return std::abs(r1) < std::abs(r2) ? r2 : r1;
    }
}

template <class T>
std::optional<std::vector<T>> fit_powers(const Field<T>& field, const GridSamples<T>& samples,
                                         const std::vector<T>& bases) {
    Matrix<T> m;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const long s = samples.s_at(i);
        std::vector<T> row;
        for (const auto& b : bases) row.push_back(ipow(b, s));
        row.push_back(ratio<T>(1));
        m.push_back(std::move(row));
    }
    try {
        return solve_consistent(field, m, samples.values);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Inconsistent) return std::nullopt;
        throw;
    }
}

// Single-exponential fits come first: in float mode the two-exponential fit
// cannot resolve a coefficient whose power has decayed below rounding.
template <class T>
GridForm<T> fit_modulus_family(const Field<T>& field, const GridSamples<T>& samples, const T& q) {
    const T inv = ratio<T>(1) / q;
    for (const T& base : {q, inv}) {
        if (auto c = fit_powers(field, samples, {base}); c && !field.is_zero((*c)[0], magnitude((*c)[1]))) {
            return GridForm<T>::exponential((*c)[0], (*c)[1], base);
        }
    }
    auto c = fit_powers(field, samples, {q, inv});
    if (!c) throw Error(ErrorKind::Inconsistent, "samples do not fit c1 q^s + c2 q^-s + c0");
    return GridForm<T>::qquadratic((*c)[0], (*c)[1], (*c)[2], q);
}

template <class T>
GridForm<T> fit_quadratic_family(const Field<T>& field, const GridSamples<T>& samples) {
    Matrix<T> m;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const T s = ratio<T>(samples.s_at(i));
        m.push_back({s * s, s, ratio<T>(1)});
    }
    auto c = solve_consistent(field, m, samples.values);
    const double scale = std::max({magnitude(c[0]), magnitude(c[1]), magnitude(c[2])});
    if (field.is_zero(c[0], scale)) return GridForm<T>::linear(c[1], c[2]);
    return GridForm<T>::quadratic(c[0], c[1], c[2]);
}

template <class T>
GridForm<T> fit_alternating_family(const Field<T>& field, const GridSamples<T>& samples) {
    Matrix<T> m;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const long s = samples.s_at(i);
        const T sign = alt_sign<T>(s);
        m.push_back({sign * ratio<T>(s), sign, ratio<T>(1)});
    }
    auto c = solve_consistent(field, m, samples.values);
    return GridForm<T>::alt_quadratic(c[2], c[0], c[1]);
}

// Affine first-order grids from z' = a z + b.
template <class T>
std::optional<GridForm<T>> form_from_relation(const Field<T>& field, const LinearRelation<T>& rel,
                                              const GridSamples<T>& samples) {
    const auto& al = rel.alpha;
    if (field.is_zero(al[2])) return std::nullopt;
    const T a = -al[1] / al[2];
    const T b = -al[3] / al[2];
    const long s0 = samples.s0;
    const T& z0 = samples.values.front();
    if (field.is_zero(a)) return std::nullopt;
    if (field.equal(a, ratio<T>(1))) return GridForm<T>::linear(b, z0 - b * ratio<T>(s0));
    const T c0 = b / (ratio<T>(1) - a);
    const T c1 = (z0 - c0) / ipow(a, s0);
    return GridForm<T>::exponential(c1, c0, a);
}

}  // namespace

template <class T>
T grid_eval(const GridForm<T>& form, long s) {
    const T st = ratio<T>(s);
    switch (form.family) {
        case GridFamily::QQuadratic: return form.c1 * ipow(form.q, s) + form.c2 * ipow(form.q, -s) + form.c0;
        case GridFamily::Quadratic: return form.c2 * st * st + form.c1 * st + form.c0;
        case GridFamily::AltQuadratic: return alt_sign<T>(s) * (form.c1 * st + form.c0) + form.c2;
        case GridFamily::Linear: return form.c1 * st + form.c0;
        case GridFamily::Exponential: return form.c1 * ipow(form.q, s) + form.c0;
    }
    return ratio<T>(0);
}

template <class T>
T companion_eval(const GridForm<T>& form, long s) {
    switch (form.family) {
        case GridFamily::QQuadratic:
        case GridFamily::Exponential: {
            // sqrt(q) * (z(s + 1/2) - c0), rational whenever q is.
            const T c2 = form.family == GridFamily::QQuadratic ? form.c2 : ratio<T>(0);
            return form.c1 * ipow(form.q, s + 1) + c2 * ipow(form.q, -s);
        }
        case GridFamily::Quadratic:
        case GridFamily::Linear: {
            const T h = ratio<T>(2 * s + 1, 2);
            const T c2 = form.family == GridFamily::Quadratic ? form.c2 : ratio<T>(0);
            return c2 * h * h + form.c1 * h + form.c0;
        }
        case GridFamily::AltQuadratic: break;
    }
    throw Error(ErrorKind::PreconditionViolated, "alternating grids have no half-step companion grid");
}

template <class T>
void require_distinct(const Field<T>& field, const GridSamples<T>& samples) {
    std::vector<std::pair<T, std::size_t>> sorted;
    sorted.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) sorted.emplace_back(samples.values[i], i);
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (field.equal(sorted[i - 1].first, sorted[i].first)) {
            throw Error(ErrorKind::Degenerate, "z(" + std::to_string(samples.s_at(sorted[i - 1].second)) + ") = z(" +
                                                   std::to_string(samples.s_at(sorted[i].second)) + ")");
        }
    }
}

template <class T>
GridSamples<T> sample_grid(const Field<T>& field, const GridForm<T>& form, long s0, std::size_t count) {
    if (form.has_modulus()) {
        if (field.is_zero(form.q) || field.equal(form.q, ratio<T>(1)) || field.equal(form.q, ratio<T>(-1))) {
            throw Error(ErrorKind::PreconditionViolated, "q must avoid 0, 1 and -1");
        }
    }
    GridSamples<T> out{s0, {}};
    out.values.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.values.push_back(grid_eval(form, s0 + static_cast<long>(i)));
    require_distinct(field, out);
    return out;
}

template <class T>
GridForm<T> canonicalize(const GridForm<T>& form) {
    if (form.family != GridFamily::QQuadratic) return form;
    if (abs_value(form.q) >= ratio<T>(1)) return form;
    return GridForm<T>::qquadratic(form.c2, form.c1, form.c0, ratio<T>(1) / form.q);
}

template <class T>
ConicParams<T> fit_conic(const Field<T>& field, const GridSamples<T>& samples) {
    require_samples(samples, kMinConicSamples, "fit_conic");
    const auto& z = samples.values;
    Matrix<T> m;
    std::vector<T> rhs;
    std::vector<double> cancelled;
    // Unknowns (xi, eta, zeta).
    for (std::size_t i = 1; i + 1 < z.size(); ++i) {
        m.push_back({z[i], ratio<T>(1), ratio<T>(0)});
        rhs.push_back(-(z[i - 1] + z[i + 1]));
        cancelled.push_back(magnitude(z[i - 1]) + magnitude(z[i + 1]));
        m.push_back({ratio<T>(0), z[i], ratio<T>(1)});
        rhs.push_back(z[i - 1] * z[i + 1] - z[i] * z[i]);
        cancelled.push_back(magnitude(T(z[i - 1] * z[i + 1])) + magnitude(T(z[i] * z[i])));
    }
    for (std::size_t i = 0; i + 1 < z.size(); ++i) {
        m.push_back({z[i] * z[i + 1], z[i] + z[i + 1], ratio<T>(1)});
        rhs.push_back(-(z[i] * z[i] + z[i + 1] * z[i + 1]));
        cancelled.push_back(0.0);
    }
    try {
        auto x = solve_consistent(field, m, rhs, cancelled);
        return {x[0], x[1], x[2]};
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Inconsistent || e.kind() == ErrorKind::Underdetermined) {
            throw Error(ErrorKind::NotConic, e.what());
        }
        throw;
    }
}

template <class T>
BiQuadraticCurve<T> fit_biquadratic(const Field<T>& field, const GridSamples<T>& samples) {
    require_samples(samples, kMinBiquadraticSamples, "fit_biquadratic");
    const auto& z = samples.values;
    Matrix<T> m;
    for (std::size_t i = 0; i + 1 < z.size(); ++i) {
        const T& x = z[i];
        const T& y = z[i + 1];
        m.push_back({x * x * y * y, x * y * (x + y), x * x + y * y, x * y, x + y, ratio<T>(1)});
    }
    try {
        auto v = nullspace_vector(field, m);
        return BiQuadraticCurve<T>{{v[0], v[1], v[2], v[3], v[4], v[5]}};
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::FullRank) throw Error(ErrorKind::NotBiquadratic, e.what());
        throw;
    }
}

template <class T>
std::optional<LinearRelation<T>> detect_linear_relation(const Field<T>& field, const GridSamples<T>& samples) {
    require_samples(samples, kMinLinearRelationSamples, "detect_linear_relation");
    const auto& z = samples.values;
    Matrix<T> m;
    for (std::size_t i = 0; i + 1 < z.size(); ++i) m.push_back({z[i] * z[i + 1], z[i], z[i + 1], ratio<T>(1)});
    std::vector<T> v;
    try {
        v = nullspace_vector(field, m);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::FullRank) return std::nullopt;
        throw;
    }
    // A Moebius step (alpha1 != 0) cannot carry a polynomial system, and the
    // symmetric case alpha2 == alpha3 only produces period-two sequences.
    if (!field.is_zero(v[0])) return std::nullopt;
    if (field.equal(v[1], v[2])) return std::nullopt;
    LinearRelation<T> rel;
    std::copy(v.begin(), v.end(), rel.alpha.begin());
    return rel;
}

template <class T>
GridSamples<T> step_grid(const Field<T>& field, const BiQuadraticCurve<T>& curve, const T& z0, const T& z1,
                         std::size_t count) {
    if (count < 2) throw Error(ErrorKind::PreconditionViolated, "step_grid needs count >= 2");
    if (field.equal(z0, z1)) throw Error(ErrorKind::DistinctnessViolated, "z0 == z1");
    {
        const auto& a = curve.alpha;
        const double scale = magnitude(a[0] * z0 * z0 * z1 * z1) + magnitude(a[1] * z0 * z1 * (z0 + z1)) +
                             magnitude(a[2] * (z0 * z0 + z1 * z1)) + magnitude(a[3] * z0 * z1) +
                             magnitude(a[4] * (z0 + z1)) + magnitude(a[5]);
        if (!field.is_zero(curve(z0, z1), scale)) {
            throw Error(ErrorKind::PreconditionViolated, "(z0, z1) is not on the curve");
        }
    }
    GridSamples<T> out{0, {z0, z1}};
    out.values.reserve(count);
    while (out.values.size() < count) {
        const T& prev = out.values[out.values.size() - 2];
        const T& cur = out.values.back();
        const T a2 = curve.a2(cur);
        if (field.is_zero(a2)) {
            throw Error(ErrorKind::StepDegenerate,
                        "leading coefficient vanishes at step " + std::to_string(out.values.size() - 1));
        }
        T next = -curve.a1(cur) / a2 - prev;
        for (const auto& v : out.values) {
            if (field.equal(v, next)) {
                throw Error(ErrorKind::DistinctnessViolated,
                            "repeated value at step " + std::to_string(out.values.size()));
            }
        }
        out.values.push_back(std::move(next));
    }
    return out;
}

template <class T>
Classification<T> classify_grid(const Field<T>& field, const GridSamples<T>& samples) {
    require_samples(samples, kMinClassifySamples, "classify_grid");
    require_distinct(field, samples);

    Classification<T> out;
    ConicParams<T> conic;
    try {
        conic = fit_conic(field, samples);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotConic) throw;
        NonAWReport<T> report;
        report.stage = ClassifyStage::Conic;
        report.detail = e.what();
        report.linear_relation = detect_linear_relation(field, samples);
        if (report.linear_relation) {
            auto form = form_from_relation(field, *report.linear_relation, samples);
            if (form && reproduces(field, *form, samples)) {
                out.result = canonicalize(*form);
                return out;
            }
        }
        try {
            report.biquadratic = fit_biquadratic(field, samples);
        } catch (const Error& b) {
            if (b.kind() != ErrorKind::NotBiquadratic) throw;
        }
        out.result = std::move(report);
        return out;
    }
    out.conic = conic;

    try {
        GridForm<T> form;
        if (field.equal(conic.xi, ratio<T>(-2))) {
            form = fit_quadratic_family(field, samples);
        } else if (field.equal(conic.xi, ratio<T>(2))) {
            form = fit_alternating_family(field, samples);
        } else {
            auto q = select_modulus(field, conic.xi);
            if (!q) {
                throw Error(ErrorKind::ModulusNotRepresentable,
                            "roots of r^2 + xi r + 1 with xi = " + format_scalar(conic.xi) + " are not in the " +
                                std::string(Field<T>::name) + " field");
            }
            form = fit_modulus_family(field, samples, *q);
        }
        form = canonicalize(form);
        if (!reproduces(field, form, samples)) {
            throw Error(ErrorKind::Inconsistent, "fitted family does not reproduce every sample");
        }
        out.result = form;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Inconsistent && e.kind() != ErrorKind::Underdetermined) throw;
        NonAWReport<T> report;
        report.stage = ClassifyStage::FamilyFit;
        report.detail = e.what();
        out.result = std::move(report);
    }
    return out;
}

#define BOCHNER_INSTANTIATE_GRID(T)                                                                              \
    template struct BiQuadraticCurve<T>;                                                                         \
    template T grid_eval(const GridForm<T>&, long);                                                              \
    template T companion_eval(const GridForm<T>&, long);                                                         \
    template void require_distinct(const Field<T>&, const GridSamples<T>&);                                      \
    template GridSamples<T> sample_grid(const Field<T>&, const GridForm<T>&, long, std::size_t);                 \
    template GridForm<T> canonicalize(const GridForm<T>&);                                                       \
    template ConicParams<T> fit_conic(const Field<T>&, const GridSamples<T>&);                                   \
    template BiQuadraticCurve<T> fit_biquadratic(const Field<T>&, const GridSamples<T>&);                        \
    template std::optional<LinearRelation<T>> detect_linear_relation(const Field<T>&, const GridSamples<T>&);    \
    template GridSamples<T> step_grid(const Field<T>&, const BiQuadraticCurve<T>&, const T&, const T&,           \
                                      std::size_t);                                                              \
    template Classification<T> classify_grid(const Field<T>&, const GridSamples<T>&);

BOCHNER_INSTANTIATE_GRID(Rational)
BOCHNER_INSTANTIATE_GRID(double)

}  // namespace bochner
