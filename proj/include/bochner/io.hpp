#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "bochner/awoperator.hpp"
#include "bochner/duality.hpp"
#include "bochner/grid.hpp"
#include "bochner/polynomial.hpp"
#include "bochner/spectral.hpp"

namespace bochner::io {

using json = nlohmann::json;

/// Reads and parses a JSON file; throws ParseError with the path on failure.
json read_json_file(const std::string& path);

/// Scalars are strings ("p/q", "p", or decimal literals); plain JSON numbers are accepted on input.
template <class T>
T scalar_from_json(const json& j);

template <class T>
json scalar_to_json(const T& x) {
    return format_scalar(x);
}

template <class T>
json scalars_to_json(const std::vector<T>& xs) {
    json out = json::array();
    for (const auto& x : xs) out.push_back(scalar_to_json(x));
    return out;
}

template <class T>
std::vector<T> scalars_from_json(const json& j);

template <class T>
json poly_to_json(const Polynomial<T>& p) {
    return scalars_to_json(p.coeffs());
}

template <class T>
Polynomial<T> poly_from_json(const json& j) {
    return Polynomial<T>(scalars_from_json<T>(j));
}

template <class T>
json grid_to_json(const GridForm<T>& form);

template <class T>
GridForm<T> grid_from_json(const json& j);

template <class T>
json samples_to_json(const GridSamples<T>& samples);

template <class T>
GridSamples<T> samples_from_json(const json& j);

/// {"field", "grid", "r1", "r2", "N", "window": [lo, hi], "tol"}
template <class T>
struct SystemSpec {
    GridForm<T> grid;
    Polynomial<T> r1;
    Polynomial<T> r2;
    int N = 0;
    Window window;
};

template <class T>
SystemSpec<T> system_from_json(const json& j);

template <class T>
json system_to_json(const SystemSpec<T>& spec);

/// {"N", "A", "B", "C"}
template <class T>
JacobiSystem<T> jacobi_from_json(const json& j);

template <class T>
json jacobi_to_json(const JacobiSystem<T>& sys);

template <class T>
json classification_to_json(const Classification<T>& c);

template <class T>
json spectrum_to_json(const SpectralSeq<T>& seq);

json verify_to_json(const VerifyReport& rep);

template <class T>
json dual_suite_to_json(const DualSuiteReport<T>& rep);

json window_to_json(const Window& w);

/// "LO:HI"
Window parse_window(const std::string& text);

}  // namespace bochner::io
