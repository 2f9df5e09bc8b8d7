#include "bochner/io.hpp"

#include <charconv>
#include <fstream>

#include "bochner/error.hpp"

namespace bochner::io {

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, path + ": " + e.what());
    }
}

template <class T>
T scalar_from_json(const json& j) {
    if (j.is_string()) return parse_scalar<T>(j.get<std::string>());
    if (j.is_number()) return parse_scalar<T>(j.dump());
    throw Error(ErrorKind::ParseError, "expected a scalar, got " + j.dump());
}

template <class T>
std::vector<T> scalars_from_json(const json& j) {
    if (!j.is_array()) throw Error(ErrorKind::ParseError, "expected an array of scalars, got " + j.dump());
    std::vector<T> out;
    for (const auto& x : j) out.push_back(scalar_from_json<T>(x));
    return out;
}

namespace {

const json& field_of(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::ParseError, std::string("missing field \"") + key + "\"");
    return j.at(key);
}

template <class T>
T scalar_field(const json& j, const char* key) {
    return scalar_from_json<T>(field_of(j, key));
}

long integer_field(const json& j, const char* key) {
    const auto& v = field_of(j, key);
    if (!v.is_number_integer()) throw Error(ErrorKind::ParseError, std::string("\"") + key + "\" must be an integer");
    return v.get<long>();
}

template <class T>
json pair_residuals(const std::vector<PairResidual>& xs, const char* first, const char* second) {
    json out = json::array();
    for (const auto& p : xs) {
        out.push_back({{first, p.k}, {second, p.j}, {"residual", p.residual}, {"relative", p.relative}});
    }
    return out;
}

}  // namespace

json window_to_json(const Window& w) {
    return json::array({w.lo, w.hi});
}

Window parse_window(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::ParseError, "window must look like LO:HI, got " + text);
    auto parse = [&](std::string_view part) {
        long v = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc() || ptr != part.data() + part.size()) {
            throw Error(ErrorKind::ParseError, "bad window bound \"" + std::string(part) + "\"");
        }
        return v;
    };
    const std::string_view sv(text);
    Window w{parse(sv.substr(0, colon)), parse(sv.substr(colon + 1))};
    if (w.size() == 0) throw Error(ErrorKind::ParseError, "window " + text + " is empty");
    return w;
}

template <class T>
json grid_to_json(const GridForm<T>& form) {
    json j;
    j["family"] = std::string(to_string(form.family));
    switch (form.family) {
        case GridFamily::QQuadratic:
            j["c1"] = format_scalar(form.c1);
            j["c2"] = format_scalar(form.c2);
            j["c0"] = format_scalar(form.c0);
            j["q"] = format_scalar(form.q);
            break;
        case GridFamily::Quadratic:
        case GridFamily::AltQuadratic:
            j["c2"] = format_scalar(form.c2);
            j["c1"] = format_scalar(form.c1);
            j["c0"] = format_scalar(form.c0);
            break;
        case GridFamily::Linear:
            j["c1"] = format_scalar(form.c1);
            j["c0"] = format_scalar(form.c0);
            break;
        case GridFamily::Exponential:
            j["c1"] = format_scalar(form.c1);
            j["c0"] = format_scalar(form.c0);
            j["q"] = format_scalar(form.q);
            break;
    }
    return j;
}

template <class T>
GridForm<T> grid_from_json(const json& j) {
    const auto& fam = field_of(j, "family");
    if (!fam.is_string()) throw Error(ErrorKind::ParseError, "\"family\" must be a string");
    auto family = grid_family_from_string(fam.get<std::string>());
    if (!family) throw Error(ErrorKind::ParseError, "unknown grid family " + fam.dump());
    switch (*family) {
        case GridFamily::QQuadratic:
            return GridForm<T>::qquadratic(scalar_field<T>(j, "c1"), scalar_field<T>(j, "c2"), scalar_field<T>(j, "c0"),
                                           scalar_field<T>(j, "q"));
        case GridFamily::Quadratic:
            return GridForm<T>::quadratic(scalar_field<T>(j, "c2"), scalar_field<T>(j, "c1"), scalar_field<T>(j, "c0"));
        case GridFamily::AltQuadratic:
            return GridForm<T>::alt_quadratic(scalar_field<T>(j, "c2"), scalar_field<T>(j, "c1"),
                                              scalar_field<T>(j, "c0"));
        case GridFamily::Linear: return GridForm<T>::linear(scalar_field<T>(j, "c1"), scalar_field<T>(j, "c0"));
        case GridFamily::Exponential:
            return GridForm<T>::exponential(scalar_field<T>(j, "c1"), scalar_field<T>(j, "c0"), scalar_field<T>(j, "q"));
    }
    throw Error(ErrorKind::ParseError, "unknown grid family");
}

template <class T>
json samples_to_json(const GridSamples<T>& samples) {
    return {{"s0", samples.s0}, {"values", scalars_to_json(samples.values)}};
}

template <class T>
GridSamples<T> samples_from_json(const json& j) {
    GridSamples<T> out;
    out.s0 = j.is_object() && j.contains("s0") ? integer_field(j, "s0") : 0;
    out.values = scalars_from_json<T>(field_of(j, "values"));
    return out;
}

template <class T>
SystemSpec<T> system_from_json(const json& j) {
    SystemSpec<T> spec;
    spec.grid = grid_from_json<T>(field_of(j, "grid"));
    spec.r1 = poly_from_json<T>(field_of(j, "r1"));
    spec.r2 = poly_from_json<T>(field_of(j, "r2"));
    spec.N = static_cast<int>(integer_field(j, "N"));
    if (spec.N < 0) throw Error(ErrorKind::ParseError, "\"N\" must be >= 0");
    const auto& w = field_of(j, "window");
    if (!w.is_array() || w.size() != 2 || !w[0].is_number_integer() || !w[1].is_number_integer()) {
        throw Error(ErrorKind::ParseError, "\"window\" must be [lo, hi]");
    }
    spec.window = {w[0].get<long>(), w[1].get<long>()};
    if (spec.window.size() == 0) throw Error(ErrorKind::ParseError, "\"window\" is empty");
    return spec;
}

template <class T>
json system_to_json(const SystemSpec<T>& spec) {
    return {{"field", std::string(Field<T>::name)},
            {"grid", grid_to_json(spec.grid)},
            {"r1", poly_to_json(spec.r1)},
            {"r2", poly_to_json(spec.r2)},
            {"N", spec.N},
            {"window", window_to_json(spec.window)}};
}

template <class T>
JacobiSystem<T> jacobi_from_json(const json& j) {
    JacobiSystem<T> sys;
    sys.N = static_cast<int>(integer_field(j, "N"));
    sys.a = scalars_from_json<T>(field_of(j, "A"));
    sys.b = scalars_from_json<T>(field_of(j, "B"));
    sys.c = scalars_from_json<T>(field_of(j, "C"));
    try {
        validate(sys);
    } catch (const Error& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
    return sys;
}

template <class T>
json jacobi_to_json(const JacobiSystem<T>& sys) {
    return {{"N", sys.N}, {"A", scalars_to_json(sys.a)}, {"B", scalars_to_json(sys.b)}, {"C", scalars_to_json(sys.c)}};
}

template <class T>
json classification_to_json(const Classification<T>& c) {
    json j;
    j["aw"] = c.is_aw();
    if (c.conic) {
        j["conic"] = {{"xi", format_scalar(c.conic->xi)},
                      {"eta", format_scalar(c.conic->eta)},
                      {"zeta", format_scalar(c.conic->zeta)}};
    }
    if (c.is_aw()) {
        j["grid"] = grid_to_json(c.form());
    } else {
        const auto& r = c.non_aw();
        j["stage"] = std::string(to_string(r.stage));
        j["detail"] = r.detail;
        j["linear_relation"] = r.linear_relation ? scalars_to_json(std::vector<T>(r.linear_relation->alpha.begin(),
                                                                                  r.linear_relation->alpha.end()))
                                                 : json(nullptr);
        j["biquadratic"] = r.biquadratic ? scalars_to_json(std::vector<T>(r.biquadratic->alpha.begin(),
                                                                          r.biquadratic->alpha.end()))
                                         : json(nullptr);
    }
    return j;
}

template <class T>
json spectrum_to_json(const SpectralSeq<T>& seq) {
    json j;
    j["xi"] = format_scalar(seq.xi);
    j["regime"] = std::string(to_string(seq.regime));
    switch (seq.regime) {
        case OmegaRegime::QType:
            if (seq.trigonometric) {
                j["theta"] = seq.theta;
                j["G1"] = format_scalar(seq.g1);
                j["G2"] = format_scalar(seq.g2);
            } else {
                j["q"] = format_scalar(seq.q);
                j["G1"] = format_scalar(seq.g1);
                j["G2"] = format_scalar(seq.g2);
            }
            break;
        case OmegaRegime::Linear:
        case OmegaRegime::Alternating:
            j["G1"] = format_scalar(seq.g1);
            j["G0"] = format_scalar(seq.g0);
            break;
    }
    j["omega"] = scalars_to_json(std::vector<T>(seq.omega.begin() + (seq.omega.empty() ? 0 : 1), seq.omega.end()));
    j["lambda"] = scalars_to_json(seq.lambda);
    j["certified_range"] = json::array({0, seq.n_max()});
    return j;
}

json verify_to_json(const VerifyReport& rep) {
    json failures = json::array();
    for (const auto& f : rep.failures) {
        failures.push_back({{"n", f.n}, {"s", f.s}, {"residual", f.residual}, {"relative", f.relative}});
    }
    return {{"passed", rep.passed},
            {"max_residual", rep.max_residual},
            {"max_relative", rep.max_relative},
            {"per_n", rep.per_n},
            {"per_n_recursion", rep.per_n_recursion},
            {"failures", failures},
            {"non_monic", rep.non_monic},
            {"monic_deviation", rep.monic_deviation},
            {"skipped_nodes", rep.skipped_nodes},
            {"certified_window", window_to_json(rep.window)}};
}

template <class T>
json dual_suite_to_json(const DualSuiteReport<T>& rep) {
    json overrides = json::array();
    for (const auto& o : rep.restriction.overrides) {
        overrides.push_back({{"coefficient", o.coefficient}, {"s", o.s}, {"original", o.original}});
    }
    json polys = json::array();
    for (const auto& p : rep.eigen.polys) polys.push_back(poly_to_json(p));
    const auto& rec = rep.recurrence;
    json recurrence = {{"passed", rec.passed},
                       {"b", scalars_to_json(rec.b)},
                       {"u", scalars_to_json(std::vector<T>(rec.u.begin() + (rec.u.empty() ? 0 : 1), rec.u.end()))},
                       {"norms", rec.norms},
                       {"max_residual", rec.max_residual},
                       {"p_next", poly_to_json(rec.p_next)},
                       {"vanishing_nodes", rec.vanishing_nodes},
                       {"all_u_nonzero", rec.all_u_nonzero},
                       {"note", rec.note}};
    return {{"passed", rep.passed},
            {"note", rep.note},
            {"window", json::array({rep.restriction.lo, rep.restriction.lo + rep.restriction.jacobi.N})},
            {"boundary_overrides", overrides},
            {"jacobi", jacobi_to_json(rep.restriction.jacobi)},
            {"z", scalars_to_json(rep.restriction.z)},
            {"lambda", scalars_to_json(rep.eigen.lambda)},
            {"polynomials", polys},
            {"weights", scalars_to_json(rep.weights)},
            {"orthogonality",
             {{"passed", rep.orthogonality.passed},
              {"pairs_checked", rep.orthogonality.pairs_checked},
              {"max_relative", rep.orthogonality.max_relative},
              {"norms", rep.orthogonality.norms},
              {"failures", pair_residuals<T>(rep.orthogonality.failures, "k", "j")}}},
            {"duality",
             {{"passed", rep.duality.passed},
              {"pairs_checked", rep.duality.pairs_checked},
              {"max_relative", rep.duality.max_relative},
              {"failures", pair_residuals<T>(rep.duality.failures, "n", "s")}}},
            {"recurrence", recurrence},
            {"closing_failures", rep.closing_failures}};
}

#define BOCHNER_INSTANTIATE_IO(T)                                               \
    template T scalar_from_json<T>(const json&);                                \
    template std::vector<T> scalars_from_json<T>(const json&);                  \
    template json grid_to_json(const GridForm<T>&);                             \
    template GridForm<T> grid_from_json<T>(const json&);                        \
    template json samples_to_json(const GridSamples<T>&);                       \
    template GridSamples<T> samples_from_json<T>(const json&);                  \
    template SystemSpec<T> system_from_json<T>(const json&);                    \
    template json system_to_json(const SystemSpec<T>&);                         \
    template JacobiSystem<T> jacobi_from_json<T>(const json&);                  \
    template json jacobi_to_json(const JacobiSystem<T>&);                       \
    template json classification_to_json(const Classification<T>&);            \
    template json spectrum_to_json(const SpectralSeq<T>&);                      \
    template json dual_suite_to_json(const DualSuiteReport<T>&);

BOCHNER_INSTANTIATE_IO(Rational)
BOCHNER_INSTANTIATE_IO(double)

}  // namespace bochner::io
