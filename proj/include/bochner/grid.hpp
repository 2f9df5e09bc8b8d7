#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bochner/scalar.hpp"

namespace bochner {

/**
 * The five closed-form grid families that carry polynomial eigenfunctions.
 *
 *   QQuadratic    z(s) = c1 q^s + c2 q^-s + c0
 *   Quadratic     z(s) = c2 s^2 + c1 s + c0
 *   AltQuadratic  z(s) = (-1)^s (c1 s + c0) + c2
 *   Linear        z(s) = c1 s + c0
 *   Exponential   z(s) = c1 q^s + c0
 *
 * AltQuadratic is the q = -1 member of the family: it is the general solution
 * of the three-point conic recurrence when xi = +2. A (-1)^s s^2 term would not
 * lie on any symmetric bi-quadratic curve, so c2 enters as the additive offset.
 */
enum class GridFamily { QQuadratic, Quadratic, AltQuadratic, Linear, Exponential };

std::string_view to_string(GridFamily f);
std::optional<GridFamily> grid_family_from_string(std::string_view name);

template <class T>
struct GridForm {
    GridFamily family = GridFamily::Linear;
    T c0 = ratio<T>(0);
    T c1 = ratio<T>(1);
    T c2 = ratio<T>(0);
    T q = ratio<T>(1);

    static GridForm qquadratic(T c1, T c2, T c0, T q) { return {GridFamily::QQuadratic, c0, c1, c2, q}; }
    static GridForm quadratic(T c2, T c1, T c0) { return {GridFamily::Quadratic, c0, c1, c2, ratio<T>(1)}; }
    static GridForm alt_quadratic(T c2, T c1, T c0) { return {GridFamily::AltQuadratic, c0, c1, c2, ratio<T>(1)}; }
    static GridForm linear(T c1, T c0) { return {GridFamily::Linear, c0, c1, ratio<T>(0), ratio<T>(1)}; }
    static GridForm exponential(T c1, T c0, T q) { return {GridFamily::Exponential, c0, c1, ratio<T>(0), q}; }

    bool has_modulus() const { return family == GridFamily::QQuadratic || family == GridFamily::Exponential; }

    friend bool operator==(const GridForm&, const GridForm&) = default;
};

/// Coefficients of z(s-1) + z(s+1) = -xi z(s) - eta and
/// z(s-1) z(s+1) = z(s)^2 + eta z(s) + zeta.
template <class T>
struct ConicParams {
    T xi;
    T eta;
    T zeta;
};

/// alpha1 x^2y^2 + alpha2 xy(x+y) + alpha3 (x^2+y^2) + alpha4 xy + alpha5 (x+y) + alpha6,
/// normalized so the first nonzero coefficient is one.
template <class T>
struct BiQuadraticCurve {
    std::array<T, 6> alpha;

    T operator()(const T& x, const T& y) const;
    // Coefficients of the quadratic in y at fixed x: a2 y^2 + a1 y + a0.
    T a2(const T& x) const { return alpha[0] * x * x + alpha[1] * x + alpha[2]; }
    T a1(const T& x) const { return alpha[1] * x * x + alpha[3] * x + alpha[4]; }
    T a0(const T& x) const { return alpha[2] * x * x + alpha[4] * x + alpha[5]; }
};

/// Non-symmetric bilinear relation alpha1 z z' + alpha2 z + alpha3 z' + alpha4 = 0
/// between consecutive samples.
template <class T>
struct LinearRelation {
    std::array<T, 4> alpha;
};

template <class T>
struct GridSamples {
    long s0 = 0;
    std::vector<T> values;

    std::size_t size() const { return values.size(); }
    long s_at(std::size_t i) const { return s0 + static_cast<long>(i); }
};

enum class ClassifyStage { Conic, FamilyFit };
std::string_view to_string(ClassifyStage stage);

/// Outcome when the samples do not come from an admissible grid.
template <class T>
struct NonAWReport {
    ClassifyStage stage = ClassifyStage::Conic;
    std::optional<LinearRelation<T>> linear_relation;
    std::optional<BiQuadraticCurve<T>> biquadratic;
    std::string detail;
};

template <class T>
struct Classification {
    std::variant<GridForm<T>, NonAWReport<T>> result;
    std::optional<ConicParams<T>> conic;

    bool is_aw() const { return std::holds_alternative<GridForm<T>>(result); }
    const GridForm<T>& form() const { return std::get<GridForm<T>>(result); }
    const NonAWReport<T>& non_aw() const { return std::get<NonAWReport<T>>(result); }
};

inline constexpr std::size_t kMinConicSamples = 6;
inline constexpr std::size_t kMinBiquadraticSamples = 7;
inline constexpr std::size_t kMinLinearRelationSamples = 5;
inline constexpr std::size_t kMinClassifySamples = 9;

template <class T>
T grid_eval(const GridForm<T>& form, long s);

/// Companion grid used by the divided-difference check, an affine image of
/// z(s + 1/2) that stays in the field (see magnus_check).
template <class T>
T companion_eval(const GridForm<T>& form, long s);

/// Samples z(s0), ..., z(s0 + count - 1); throws Degenerate when two coincide.
template <class T>
GridSamples<T> sample_grid(const Field<T>& field, const GridForm<T>& form, long s0, std::size_t count);

/// Throws Degenerate if two sample values coincide in the field.
template <class T>
void require_distinct(const Field<T>& field, const GridSamples<T>& samples);

/// q <-> 1/q relabeling so that |q| >= 1 for QQuadratic grids.
template <class T>
GridForm<T> canonicalize(const GridForm<T>& form);

template <class T>
ConicParams<T> fit_conic(const Field<T>& field, const GridSamples<T>& samples);

template <class T>
BiQuadraticCurve<T> fit_biquadratic(const Field<T>& field, const GridSamples<T>& samples);

template <class T>
std::optional<LinearRelation<T>> detect_linear_relation(const Field<T>& field, const GridSamples<T>& samples);

/// Walks the curve from (z0, z1): the next point is the other root of
/// a2(z) t^2 + a1(z) t + a0(z) = 0, taken from the root sum -a1/a2.
template <class T>
GridSamples<T> step_grid(const Field<T>& field, const BiQuadraticCurve<T>& curve, const T& z0, const T& z1,
                         std::size_t count);

template <class T>
Classification<T> classify_grid(const Field<T>& field, const GridSamples<T>& samples);

}  // namespace bochner
