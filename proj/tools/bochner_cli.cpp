// Command-line front end: classify, synth, build, verify, dualcheck, spectrum.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include "bochner/awoperator.hpp"
#include "bochner/duality.hpp"
#include "bochner/error.hpp"
#include "bochner/grid.hpp"
#include "bochner/io.hpp"
#include "bochner/spectral.hpp"

namespace {

using bochner::Error;
using bochner::ErrorKind;
using bochner::Field;
using bochner::Rational;
using bochner::Window;
using json = bochner::io::json;

enum Exit { kPass = 0, kInputError = 1, kNonAW = 2, kDegenerate = 3, kVerifyFailed = 4 };

constexpr std::uint64_t kDefaultSeed = 20240917;

struct RunConfig {
    std::string command;
    std::string input;
    std::string output;
    std::string field;
    std::optional<double> tol;
    std::optional<std::string> window;
    std::optional<int> N;
    std::uint64_t seed = kDefaultSeed;
    std::optional<std::string> xi, omega1, omega2;
    std::optional<long> perturb_weight;
};

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotConic:
        case ErrorKind::NotBiquadratic:
        case ErrorKind::NotPolynomial:
        case ErrorKind::NotTriangular: return kNonAW;
        case ErrorKind::SpectrumDegenerate:
        case ErrorKind::DegreeCollapse:
        case ErrorKind::IrreducibilityViolated:
        case ErrorKind::Degenerate:
        case ErrorKind::DegenerateWindow:
        case ErrorKind::StepDegenerate:
        case ErrorKind::ZeroFactor:
        case ErrorKind::NullNorm: return kDegenerate;
        case ErrorKind::NotEigenvalue: return kVerifyFailed;
        default: return kInputError;
    }
}

// Reports go to --output when given (summary on stdout), otherwise to stdout
// (summary on stderr).
void emit(const RunConfig& cfg, const json& report, const std::string& summary) {
    if (cfg.output.empty()) {
        std::cerr << summary << "\n";
        std::cout << report.dump(2) << "\n";
        return;
    }
    std::ofstream out(cfg.output);
    if (!out) throw Error(ErrorKind::ParseError, "cannot write " + cfg.output);
    out << report.dump(2) << "\n";
    std::cout << summary << "\n";
}

std::string stage_error(const char* stage, const Error& e) {
    return std::string(stage) + ": " + e.what();
}

template <class T>
bochner::io::SystemSpec<T> load_system(const RunConfig& cfg, const json& doc) {
    auto spec = bochner::io::system_from_json<T>(doc);
    if (cfg.N) {
        if (*cfg.N < 0) throw Error(ErrorKind::ParseError, "-N must be >= 0");
        spec.N = *cfg.N;
    }
    if (cfg.window && cfg.command != "dualcheck") spec.window = bochner::io::parse_window(*cfg.window);
    return spec;
}

template <class T>
int run_classify(const RunConfig& cfg, const Field<T>& field, const json& doc) {
    const auto samples = bochner::io::samples_from_json<T>(doc);
    const auto c = bochner::classify_grid(field, samples);
    json report = bochner::io::classification_to_json(c);
    report["field"] = std::string(Field<T>::name);
    if (c.is_aw()) {
        emit(cfg, report, "AW grid: " + std::string(bochner::to_string(c.form().family)));
        return kPass;
    }
    emit(cfg, report, "NonAW (stage " + std::string(bochner::to_string(c.non_aw().stage)) + ")");
    return kNonAW;
}

template <class T>
json system_header(const bochner::DifferenceSystem<T>& sys) {
    json violations = json::array();
    for (const auto& v : sys.violations) {
        violations.push_back({{"s", v.s}, {"A_prev_zero", v.a_zero}, {"C_zero", v.c_zero}});
    }
    return {{"grid", bochner::io::grid_to_json(sys.grid)},
            {"conic",
             {{"xi", bochner::format_scalar(sys.conic.xi)},
              {"eta", bochner::format_scalar(sys.conic.eta)},
              {"zeta", bochner::format_scalar(sys.conic.zeta)}}},
            {"requested_window", bochner::io::window_to_json(sys.requested)},
            {"certified_window", bochner::io::window_to_json(sys.certified)},
            {"skipped_nodes", sys.skipped_nodes},
            {"irreducibility_violations", violations}};
}

template <class T>
bochner::DifferenceSystem<T> synthesize_stage(const Field<T>& field, const bochner::io::SystemSpec<T>& spec) {
    return bochner::synthesize(field, spec.grid, spec.r1, spec.r2, spec.N, spec.window);
}

template <class T>
int run_synth(const RunConfig& cfg, const Field<T>& field, const json& doc) {
    const auto spec = load_system<T>(cfg, doc);
    const auto sys = synthesize_stage(field, spec);
    json report = system_header(sys);
    json rows = json::array();
    for (const auto& r : bochner::tabulate(field, sys, spec.window).rows) {
        rows.push_back({{"s", r.s},
                        {"z", bochner::format_scalar(r.z)},
                        {"A", bochner::format_scalar(r.A)},
                        {"B", bochner::format_scalar(r.B)},
                        {"C", bochner::format_scalar(r.C)}});
    }
    report["nodes"] = rows;
    report["field"] = std::string(Field<T>::name);
    emit(cfg, report,
         "synthesized; certified window [" + std::to_string(sys.certified.lo) + ", " +
             std::to_string(sys.certified.hi) + "]");
    return kPass;
}

template <class T>
bool lambda_matches(const Field<T>& field, const bochner::EigenPolySet<T>& eig, const bochner::SpectralSeq<T>& seq) {
    for (std::size_t n = 0; n < eig.lambda.size(); ++n) {
        if (!field.equal(eig.lambda[n], seq.lambda[n])) return false;
    }
    return true;
}

template <class T>
int run_build(const RunConfig& cfg, const Field<T>& field, const json& doc, bool probe) {
    const auto spec = load_system<T>(cfg, doc);
    const auto sys = synthesize_stage(field, spec);
    const auto eig = bochner::build_eigenpolys(field, sys, spec.N);
    const auto rep = bochner::verify_system(field, sys, eig, sys.certified);
    const bool lambdas = lambda_matches(field, eig, sys.spectrum);

    json report = system_header(sys);
    report["field"] = std::string(Field<T>::name);
    report["N"] = spec.N;
    json polys = json::array();
    for (const auto& p : eig.polys) polys.push_back(bochner::io::poly_to_json(p));
    report["polynomials"] = polys;
    report["lambda"] = bochner::io::scalars_to_json(eig.lambda);
    report["lambda_matches_spectrum"] = lambdas;
    report["spectrum"] = bochner::io::spectrum_to_json(sys.spectrum);
    report["verification"] = bochner::io::verify_to_json(rep);
    report["max_residual"] = rep.max_residual;
    bool passed = rep.passed && lambdas;

    if (probe) {
        json magnus = json::array();
        for (int n = 1; n <= spec.N; ++n) {
            const auto m = bochner::magnus_check(field, eig.polys[static_cast<std::size_t>(n)], sys.grid,
                                                 Window{sys.certified.lo, sys.certified.lo + n + 3});
            magnus.push_back({{"n", n}, {"passed", m.passed}, {"max_residual", m.max_residual}, {"note", m.note}});
        }
        report["magnus"] = magnus;

        auto table = bochner::tabulate(field, sys, sys.certified);
        if (!table.rows.empty()) {
            std::mt19937_64 rng(cfg.seed);
            std::uniform_int_distribution<std::size_t> pick(0, table.rows.size() - 1);
            auto& row = table.rows[pick(rng)];
            const long s = row.s;
            row.A *= bochner::ratio<T>(1000001, 1000000);
            const auto faulty = bochner::verify_table(field, table, eig, sys.rseq);
            const bool detected = !faulty.passed;
            bool localized = detected;
            for (const auto& f : faulty.failures) localized = localized && f.s == s;
            report["fault_probe"] = {{"seed", cfg.seed},
                                     {"perturbed", "A"},
                                     {"s", s},
                                     {"detected", detected},
                                     {"localized", localized},
                                     {"max_relative", faulty.max_relative}};
            passed = passed && detected;
        }
    }
    report["passed"] = passed;
    std::string summary = passed ? "pass" : "FAIL";
    summary += ": N = " + std::to_string(spec.N) + ", max residual " + std::to_string(rep.max_residual);
    emit(cfg, report, summary);
    return passed ? kPass : kVerifyFailed;
}

template <class T>
int run_dualcheck(const RunConfig& cfg, const Field<T>& field, const json& doc) {
    auto spec = bochner::io::system_from_json<T>(doc);
    long lo = spec.window.lo;
    int N = spec.N;
    if (cfg.window) {
        const Window w = bochner::io::parse_window(*cfg.window);
        lo = w.lo;
        if (cfg.N && *cfg.N + 1 != w.size()) {
            throw Error(ErrorKind::ParseError, "window " + *cfg.window + " does not hold N + 1 = " +
                                                   std::to_string(*cfg.N + 1) + " nodes");
        }
        N = static_cast<int>(w.size()) - 1;
    } else if (cfg.N) {
        N = *cfg.N;
    }
    if (N < 0) throw Error(ErrorKind::ParseError, "-N must be >= 0");
    spec.N = N;
    spec.window = {lo, lo + N};
    const auto sys = bochner::synthesize(field, spec.grid, spec.r1, spec.r2, N, spec.window);

    std::optional<std::size_t> perturb;
    if (cfg.perturb_weight) {
        if (*cfg.perturb_weight < 0 || *cfg.perturb_weight > N) {
            throw Error(ErrorKind::ParseError, "--perturb-weight must lie in 0..N");
        }
        perturb = static_cast<std::size_t>(*cfg.perturb_weight);
    }
    bochner::DualSuiteReport<T> rep;
    try {
        rep = bochner::dual_suite(field, sys, lo, N, perturb);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::WindowDegenerate) {
            throw Error(ErrorKind::PreconditionViolated, "boundary override impossible: " + std::string(e.what()));
        }
        throw;
    }
    json report = bochner::io::dual_suite_to_json(rep);
    report["field"] = std::string(Field<T>::name);
    std::string summary = rep.passed ? "pass" : "FAIL (" + rep.note + ")";
    summary += ": window [" + std::to_string(lo) + ", " + std::to_string(lo + N) + "]";
    emit(cfg, report, summary);
    return rep.passed ? kPass : kVerifyFailed;
}

template <class T>
int run_spectrum(const RunConfig& cfg, const Field<T>& field, const json* doc) {
    T xi = bochner::ratio<T>(0), w1 = xi, w2 = xi;
    int N = cfg.N.value_or(10);
    if (doc) {
        const auto spec = load_system<T>(cfg, *doc);
        xi = bochner::conic_of(spec.grid).xi;
        w1 = bochner::clean(field, spec.r1).leading();
        w2 = bochner::clean(field, spec.r2).leading();
        N = cfg.N.value_or(spec.N);
    }
    if (cfg.xi) xi = bochner::parse_scalar<T>(*cfg.xi);
    if (cfg.omega1) w1 = bochner::parse_scalar<T>(*cfg.omega1);
    if (cfg.omega2) w2 = bochner::parse_scalar<T>(*cfg.omega2);
    if (!doc && !(cfg.xi && cfg.omega1 && cfg.omega2)) {
        throw Error(ErrorKind::ParseError, "spectrum needs --input or all of --xi, --omega1, --omega2");
    }
    const auto seq = bochner::omega_closed_form(field, xi, w1, w2, N);
    json report = bochner::io::spectrum_to_json(seq);
    report["field"] = std::string(Field<T>::name);
    emit(cfg, report, "spectrum: " + std::string(bochner::to_string(seq.regime)) + " regime, lambda_0..lambda_" +
                          std::to_string(N) + " distinct");
    return kPass;
}

template <class T>
int dispatch(const RunConfig& cfg, const Field<T>& field, const std::optional<json>& doc) {
    const auto& c = cfg.command;
    if (c == "classify") return run_classify(cfg, field, *doc);
    if (c == "synth") return run_synth(cfg, field, *doc);
    if (c == "build") return run_build(cfg, field, *doc, false);
    if (c == "verify") return run_build(cfg, field, *doc, true);
    if (c == "dualcheck") return run_dualcheck(cfg, field, *doc);
    if (c == "spectrum") return run_spectrum(cfg, field, doc ? &*doc : nullptr);
    throw Error(ErrorKind::ParseError, "unknown command " + c);
}

int run(const RunConfig& cfg) {
    std::optional<json> doc;
    if (!cfg.input.empty()) {
        doc = bochner::io::read_json_file(cfg.input);
    } else if (cfg.command != "spectrum") {
        throw Error(ErrorKind::ParseError, "--input is required");
    }

    std::string field = cfg.field;
    if (field.empty() && doc && doc->is_object() && doc->contains("field")) field = doc->at("field").get<std::string>();
    if (field.empty()) field = "rational";

    if (field == "rational") return dispatch(cfg, Field<Rational>{}, doc);
    if (field == "float") {
        bochner::Tolerance tol;
        if (cfg.tol) {
            tol.rel = *cfg.tol;
        } else if (doc && doc->is_object() && doc->contains("tol")) {
            tol.rel = bochner::io::scalar_from_json<double>(doc->at("tol"));
        }
        if (!(tol.rel > 0.0)) throw Error(ErrorKind::ParseError, "tol must be > 0");
        return dispatch(cfg, Field<double>{tol}, doc);
    }
    throw Error(ErrorKind::ParseError, "field must be rational or float, got " + field);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Difference operators with polynomial eigenfunctions on discrete grids"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&](CLI::App* sub, bool needs_input) {
        auto* in = sub->add_option("--input", cfg.input, "input JSON file");
        if (needs_input) in->required();
        sub->add_option("--output", cfg.output, "write the JSON report here");
        sub->add_option("--field", cfg.field, "rational or float")->check(CLI::IsMember({"rational", "float"}));
        sub->add_option("--tol", cfg.tol, "relative tolerance in float mode");
        sub->add_option("--window", cfg.window, "node window LO:HI");
        sub->add_option("-N", cfg.N, "highest degree");
        sub->add_option("--seed", cfg.seed, "seed for randomized probes");
    };
    auto* classify = app.add_subcommand("classify", "classify sampled grid values");
    common(classify, true);
    auto* synth = app.add_subcommand("synth", "tabulate A, B, C for a system");
    common(synth, true);
    auto* build = app.add_subcommand("build", "build eigenpolynomials and verify them");
    common(build, true);
    auto* verify = app.add_subcommand("verify", "verify a system, with a fault-injection probe");
    common(verify, true);
    auto* dual = app.add_subcommand("dualcheck", "orthogonality and duality on a finite window");
    common(dual, true);
    dual->add_option("--perturb-weight", cfg.perturb_weight, "inject a relative 1e-6 fault into w_s");
    auto* spectrum = app.add_subcommand("spectrum", "omega and lambda sequences");
    common(spectrum, false);
    spectrum->add_option("--xi", cfg.xi, "recurrence coefficient xi");
    spectrum->add_option("--omega1", cfg.omega1, "first increment omega_1");
    spectrum->add_option("--omega2", cfg.omega2, "second increment omega_2");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kInputError;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    try {
        return run(cfg);
    } catch (const Error& e) {
        const int code = exit_code_for(e.kind());
        const char* stage = code == kDegenerate ? "degeneracy" : code == kNonAW ? "non-AW input" : "input error";
        std::cerr << stage_error(stage, e) << "\n";
        return code;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    }
}
