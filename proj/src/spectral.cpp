#include "bochner/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bochner/error.hpp"

namespace bochner {

std::string_view to_string(OmegaRegime r) {
    switch (r) {
        case OmegaRegime::QType: return "q-type";
        case OmegaRegime::Linear: return "linear";
        case OmegaRegime::Alternating: return "alternating";
    }
    return "unknown";
}

template <class T>
T omega_closed(const SpectralSeq<T>& seq, long n) {
    switch (seq.regime) {
        case OmegaRegime::Linear: return seq.g1 * ratio<T>(n) + seq.g0;
        case OmegaRegime::Alternating: {
            const T sign = (n % 2 == 0) ? ratio<T>(1) : ratio<T>(-1);
            return sign * (seq.g1 * ratio<T>(n) + seq.g0);
        }
        case OmegaRegime::QType:
            if constexpr (!Field<T>::exact) {
                if (seq.trigonometric) {
                    const double a = static_cast<double>(n) * seq.theta;
                    return seq.g1 * std::cos(a) + seq.g2 * std::sin(a);
                }
            }
            return seq.g1 * ipow(seq.q, n) + seq.g2 * ipow(seq.q, -n);
    }
    return ratio<T>(0);
}

template <class T>
std::optional<std::pair<int, int>> find_lambda_collision(const Field<T>& field, const std::vector<T>& lambda) {
    const int n = static_cast<int>(lambda.size());
    if constexpr (Field<T>::exact) {
        (void)field;
        std::map<Rational, int> seen;
        for (int i = 0; i < n; ++i) {
            auto [it, inserted] = seen.emplace(lambda[static_cast<std::size_t>(i)], i);
            if (!inserted) return std::make_pair(it->second, i);
        }
        return std::nullopt;
    } else {
        std::vector<int> idx(static_cast<std::size_t>(n));
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            return lambda[static_cast<std::size_t>(a)] < lambda[static_cast<std::size_t>(b)];
        });
        std::optional<std::pair<int, int>> best;
        for (std::size_t i = 1; i < idx.size(); ++i) {
            if (field.equal(lambda[static_cast<std::size_t>(idx[i - 1])], lambda[static_cast<std::size_t>(idx[i])])) {
                auto p = std::minmax(idx[i - 1], idx[i]);
                std::pair<int, int> cand{p.first, p.second};
                if (!best || cand.second < best->second || (cand.second == best->second && cand.first < best->first)) {
                    best = cand;
                }
            }
        }
        return best;
    }
}

template <class T>
SpectralSeq<T> omega_closed_form(const Field<T>& field, const T& xi, const T& omega1, const T& omega2, int n_max) {
    if (n_max < 0) throw Error(ErrorKind::PreconditionViolated, "n_max must be >= 0");
    if (field.is_zero(omega1) || field.is_zero(omega2)) {
        throw Error(ErrorKind::PreconditionViolated, "omega1 and omega2 must be nonzero");
    }
    SpectralSeq<T> seq;
    seq.xi = xi;
    if (field.equal(xi, ratio<T>(-2))) {
        seq.regime = OmegaRegime::Linear;
        seq.g1 = omega2 - omega1;
        seq.g0 = ratio<T>(2) * omega1 - omega2;
    } else if (field.equal(xi, ratio<T>(2))) {
        seq.regime = OmegaRegime::Alternating;
        seq.g1 = omega1 + omega2;
        seq.g0 = -(ratio<T>(2) * omega1) - omega2;
    } else {
        seq.regime = OmegaRegime::QType;
        const T disc = xi * xi - ratio<T>(4);
        if constexpr (Field<T>::exact) {
            auto root = exact_sqrt(disc);
            if (!root) {
                throw Error(ErrorKind::ModulusNotRepresentable,
                            "roots of r^2 + xi r + 1 with xi = " + format_scalar(xi) + " are irrational");
            }
            T r1 = (-xi + *root) / ratio<T>(2);
            T r2 = (-xi - *root) / ratio<T>(2);
            seq.q = abs_value(r1) < abs_value(r2) ? r2 : r1;
        } else {
            if (disc < 0.0) {
                seq.trigonometric = true;
                seq.theta = std::acos(-xi / 2.0);
                const double s1 = std::sin(seq.theta), s2 = std::sin(2.0 * seq.theta);
                const double c1 = std::cos(seq.theta), c2 = std::cos(2.0 * seq.theta);
                seq.g1 = (omega1 * s2 - omega2 * s1) / s1;
                seq.g2 = (omega2 * c1 - omega1 * c2) / s1;
            } else {
                const double root = std::sqrt(disc);
                const double r1 = (-xi + root) / 2.0, r2 = (-xi - root) / 2.0;
                seq.q = std::abs(r1) < std::abs(r2) ? r2 : r1;
            }
        }
        if (!seq.trigonometric) {
            const T& q = seq.q;
            seq.g1 = (omega2 - omega1 / q) / (q * q - ratio<T>(1));
            seq.g2 = q * (omega1 - seq.g1 * q);
            // A purely decaying sequence must not pick up a growing rounding component.
            if (field.is_zero(seq.g1, magnitude(seq.g2))) {
                seq.g1 = ratio<T>(0);
                seq.g2 = q * omega1;
            }
        }
    }
    seq.omega.assign(1, ratio<T>(0));
    seq.lambda.assign(1, ratio<T>(0));
    for (int n = 1; n <= n_max; ++n) {
        seq.omega.push_back(omega_closed(seq, n));
        seq.lambda.push_back(seq.lambda.back() + seq.omega.back());
    }
    if (auto hit = find_lambda_collision(field, seq.lambda)) {
        throw Error(ErrorKind::SpectrumDegenerate,
                    "lambda_" + std::to_string(hit->first) + " = lambda_" + std::to_string(hit->second));
    }
    return seq;
}

template <class T>
UVPair<T> uv_from_conic(const ConicParams<T>& c) {
    return {Polynomial<T>{-c.eta, -c.xi}, Polynomial<T>{c.zeta, c.eta, ratio<T>(1)}};
}

template <class T>
ConicParams<T> conic_of(const GridForm<T>& form) {
    ConicParams<T> c;
    switch (form.family) {
        case GridFamily::QQuadratic:
        case GridFamily::Exponential:
            c.xi = -(form.q + ratio<T>(1) / form.q);
            c.eta = -(c.xi + ratio<T>(2)) * form.c0;
            break;
        case GridFamily::Quadratic:
            c.xi = ratio<T>(-2);
            c.eta = ratio<T>(-2) * form.c2;
            break;
        case GridFamily::Linear:
            c.xi = ratio<T>(-2);
            c.eta = ratio<T>(0);
            break;
        case GridFamily::AltQuadratic:
            c.xi = ratio<T>(2);
            c.eta = ratio<T>(-4) * form.c2;
            break;
    }
    const T z0 = grid_eval(form, 0);
    c.zeta = grid_eval(form, -1) * grid_eval(form, 1) - z0 * z0 - c.eta * z0;
    return c;
}

template <class T>
RSeq<T> build_R_sequence(const Field<T>& field, const Polynomial<T>& r1, const Polynomial<T>& r2, const UVPair<T>& uv,
                         int n_max) {
    const auto c1 = clean(field, r1);
    const auto c2 = clean(field, r2);
    if (c1.degree() != 1) throw Error(ErrorKind::PreconditionViolated, "R1 must have degree exactly 1");
    if (c2.degree() != 2) throw Error(ErrorKind::PreconditionViolated, "R2 must have degree exactly 2");
    RSeq<T> out;
    out.uv = uv;
    out.polys = {Polynomial<T>{}, c1, c2};
    for (int n = 3; n <= n_max; ++n) {
        const auto& a = out.polys[static_cast<std::size_t>(n - 1)];
        const auto& b = out.polys[static_cast<std::size_t>(n - 2)];
        auto next = clean(field, uv.v * a - uv.u * b);
        if (next.degree() != n) {
            throw Error(ErrorKind::DegreeCollapse,
                        "deg R_" + std::to_string(n) + " = " + std::to_string(next.degree()));
        }
        out.polys.push_back(std::move(next));
    }
    return out;
}

namespace {

template <class T>
void reduce_quotient(const Field<T>& field, const Polynomial<T>& num, const Polynomial<T>& den, Polynomial<T>& out_num,
                     Polynomial<T>& out_den, std::optional<Polynomial<T>>& out_poly) {
    if constexpr (Field<T>::exact) {
        (void)field;
        auto g = poly_gcd(num.is_zero() ? den : num, den);
        auto n = poly_divmod(num, g).first;
        auto d = poly_divmod(den, g).first;
        const Rational lead = d.leading();
        n *= Rational(1 / lead);
        d *= Rational(1 / lead);
        out_num = n;
        out_den = d;
        if (d.degree() == 0) out_poly = n;
    } else {
        auto [quo, rem] = poly_divmod(num, den);
        const double scale = std::max(num.norm_inf(), (quo * den).norm_inf());
        bool exact_division = true;
        for (const auto& c : rem.coeffs()) {
            if (!field.is_zero(c, scale)) exact_division = false;
        }
        if (exact_division) {
            out_poly = clean(field, quo);
            out_num = *out_poly;
            out_den = Polynomial<T>::constant(1.0);
        } else {
            out_num = num;
            out_den = den;
        }
    }
}

}  // namespace

template <class T>
UVRational<T> uv_from_R(const Field<T>& field, const Polynomial<T>& r2, const Polynomial<T>& r3,
                        const Polynomial<T>& r4, const Polynomial<T>& r5) {
    UVRational<T> out;
    const auto r33 = r3 * r3;
    const auto r24 = r2 * r4;
    if (poly_equal(field, r33, r24)) {
        throw Error(ErrorKind::IrreducibilityViolated,
                    "R3^2 - R2 R4 vanishes identically; the ladder is proportional and A or C is identically zero");
    }
    out.pi6 = r33 - r24;
    out.pi7 = r4 * r3 - r2 * r5;
    out.pi8 = r3 * r5 - r4 * r4;
    reduce_quotient(field, out.pi7, out.pi6, out.v_num, out.v_den, out.v_poly);
    reduce_quotient(field, -out.pi8, out.pi6, out.u_num, out.u_den, out.u_poly);
    return out;
}

template <class T>
T compute_Y(const T& u, const T& v, int n) {
    if (n < 0) throw Error(ErrorKind::PreconditionViolated, "n must be >= 0");
    if (n == 0) return ratio<T>(0);
    T prev = ratio<T>(0);
    T cur = ratio<T>(1);
    for (int k = 1; k < n; ++k) {
        T next = v * cur - u * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

template <class T>
T compute_Y_direct(const Field<T>& field, const T& zm, const T& zp, int n) {
    if (n < 0) throw Error(ErrorKind::PreconditionViolated, "n must be >= 0");
    if (field.equal(zm, zp)) throw Error(ErrorKind::DegenerateWindow, "z+ == z-");
    return (ipow(zp, n) - ipow(zm, n)) / (zp - zm);
}

UVPoly compute_Y_symbolic(int n) {
    if (n < 0) throw Error(ErrorKind::PreconditionViolated, "n must be >= 0");
    UVPoly prev;
    UVPoly cur;
    cur.terms[{0, 0}] = 1;
    if (n == 0) return prev;
    for (int k = 1; k < n; ++k) {
        UVPoly next;
        for (const auto& [key, c] : cur.terms) next.terms[{key.first, key.second + 1}] += c;
        for (const auto& [key, c] : prev.terms) next.terms[{key.first + 1, key.second}] -= c;
        std::erase_if(next.terms, [](const auto& kv) { return kv.second == 0; });
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

std::string UVPoly::to_string() const {
    if (terms.empty()) return "0";
    std::vector<std::pair<std::pair<int, int>, long>> order(terms.begin(), terms.end());
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        const int da = a.first.first + a.first.second;
        const int db = b.first.first + b.first.second;
        if (da != db) return da > db;
        return a.first.second > b.first.second;
    });
    std::string out;
    bool first = true;
    for (const auto& [key, c] : order) {
        const long mag = c < 0 ? -c : c;
        if (first) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        first = false;
        std::vector<std::string> factors;
        if (mag != 1 || (key.first == 0 && key.second == 0)) factors.push_back(std::to_string(mag));
        if (key.first == 1) factors.emplace_back("u");
        if (key.first > 1) factors.push_back("u^" + std::to_string(key.first));
        if (key.second == 1) factors.emplace_back("v");
        if (key.second > 1) factors.push_back("v^" + std::to_string(key.second));
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i) out += "*";
            out += factors[i];
        }
    }
    return out;
}

#define BOCHNER_INSTANTIATE_SPECTRAL(T)                                                                           \
    template T omega_closed(const SpectralSeq<T>&, long);                                                         \
    template SpectralSeq<T> omega_closed_form(const Field<T>&, const T&, const T&, const T&, int);                \
    template std::optional<std::pair<int, int>> find_lambda_collision(const Field<T>&, const std::vector<T>&);    \
    template UVPair<T> uv_from_conic(const ConicParams<T>&);                                                      \
    template ConicParams<T> conic_of(const GridForm<T>&);                                                         \
    template RSeq<T> build_R_sequence(const Field<T>&, const Polynomial<T>&, const Polynomial<T>&,                \
                                      const UVPair<T>&, int);                                                     \
    template UVRational<T> uv_from_R(const Field<T>&, const Polynomial<T>&, const Polynomial<T>&,                 \
                                     const Polynomial<T>&, const Polynomial<T>&);                                 \
    template T compute_Y(const T&, const T&, int);                                                                \
    template T compute_Y_direct(const Field<T>&, const T&, const T&, int);

BOCHNER_INSTANTIATE_SPECTRAL(Rational)
BOCHNER_INSTANTIATE_SPECTRAL(double)

}  // namespace bochner
