#include <doctest.h>

#include "bochner/error.hpp"
#include "bochner/linalg.hpp"
#include "bochner/polynomial.hpp"
#include "oracles.hpp"

using namespace bochner;
using oracle::q;

namespace {

const Field<Rational> QQ;
const Field<double> RR;

using PQ = Polynomial<Rational>;

template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::PreconditionViolated;
}

}  // namespace

TEST_CASE("polynomial evaluation") {
    CHECK(poly_eval(PQ{0, 0, 1}, Rational(3)) == 9);
    CHECK(poly_eval(PQ{1}, q(-7, 3)) == 1);
    CHECK(poly_eval(PQ{0, q(1, 5), 0, 1}, Rational(2)) == q(42, 5));
    CHECK(poly_eval(Polynomial<double>{0.0, 0.2, 0.0, 1.0}, 2.0) == doctest::Approx(8.4));
}

TEST_CASE("polynomial arithmetic strips leading zeros") {
    PQ a{1, 2, 3};
    PQ b{0, 0, 3};
    CHECK((a - b).degree() == 1);
    CHECK((a * b) == PQ{0, 0, 3, 6, 9});
    CHECK(PQ{}.is_zero());
    CHECK(PQ{0, 0}.degree() == -1);
}

TEST_CASE("polynomial division") {
    auto [quo, rem] = poly_divmod(PQ{-1, 0, 1}, PQ{-1, 1});
    CHECK(quo == PQ{1, 1});
    CHECK(rem.is_zero());
    CHECK(kind_of([] { (void)poly_divmod(PQ{1}, PQ{}); }) == ErrorKind::PreconditionViolated);
    CHECK(poly_gcd(PQ{-1, 0, 1}, PQ{1, 2, 1}) == PQ{1, 1});
}

TEST_CASE("interpolation reproduces low degree polynomials") {
    using Pts = std::vector<std::pair<Rational, Rational>>;
    CHECK(poly_interpolate(QQ, Pts{{0, 1}, {1, 1}}) == PQ{1});
    CHECK(poly_interpolate(QQ, Pts{{0, 0}, {1, 1}, {2, 4}}) == PQ{0, 0, 1});
    CHECK(poly_interpolate(QQ, Pts{{1, 2}, {2, 5}, {3, 10}}) == PQ{1, 0, 1});
    CHECK(kind_of([] { (void)poly_interpolate(QQ, Pts{{1, 2}, {1, 3}}); }) == ErrorKind::DuplicateAbscissa);

    std::vector<std::pair<double, double>> fp{{1, 2}, {2, 5}, {3, 10}};
    auto p = poly_interpolate(RR, fp);
    CHECK(p[0] == doctest::Approx(1.0));
    CHECK(p[2] == doctest::Approx(1.0));
}

TEST_CASE("interpolation agrees with a Vandermonde solve") {
    oracle::Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Rational> xs, ys;
        std::vector<std::pair<Rational, Rational>> pts;
        while (xs.size() < 6) {
            Rational x = rng.rational(20, 3);
            if (std::find(xs.begin(), xs.end(), x) != xs.end()) continue;
            xs.push_back(x);
            ys.push_back(rng.rational());
            pts.emplace_back(xs.back(), ys.back());
        }
        const auto expected = oracle::vandermonde_fit(xs, ys);
        const auto got = poly_interpolate(QQ, pts);
        for (int k = 0; k < 6; ++k) CHECK(got[k] == expected[static_cast<std::size_t>(k)]);
    }
}

TEST_CASE("nullspace vectors are normalized on the first nonzero entry") {
    auto v = nullspace_vector(QQ, Matrix<Rational>{{1, 1}});
    CHECK(v == std::vector<Rational>{1, -1});
    auto w = nullspace_vector(QQ, Matrix<Rational>{{1, 0, 0}, {0, 1, 0}});
    CHECK(w == std::vector<Rational>{0, 0, 1});
    CHECK(kind_of([] { (void)nullspace_vector(QQ, Matrix<Rational>{{1, 0}, {0, 1}}); }) == ErrorKind::FullRank);

    auto f = nullspace_vector(RR, Matrix<double>{{2.0, 4.0}});
    CHECK(f[0] == doctest::Approx(1.0));
    CHECK(f[1] == doctest::Approx(-0.5));
}

TEST_CASE("nullspace of the square grid pair matrix") {
    Matrix<Rational> m;
    for (long s = 0; s < 7; ++s) {
        Rational x = s * s, y = (s + 1) * (s + 1);
        m.push_back({x * x * y * y, x * y * (x + y), x * x + y * y, x * y, x + y, 1});
    }
    CHECK(nullspace_vector(QQ, m) == std::vector<Rational>{0, 0, 1, -2, -2, 1});
}

TEST_CASE("consistent overdetermined solves") {
    Matrix<Rational> m{{1, 0}, {0, 1}, {1, 1}};
    CHECK(solve_consistent(QQ, m, {2, 3, 5}) == std::vector<Rational>{2, 3});
    CHECK(kind_of([&] { (void)solve_consistent(QQ, m, {2, 3, 6}); }) == ErrorKind::Inconsistent);
    CHECK(kind_of([] { (void)solve_consistent(QQ, Matrix<Rational>{{1, 1}, {2, 2}}, {1, 2}); }) ==
          ErrorKind::Underdetermined);

    Matrix<double> md{{1, 0}, {0, 1}, {1, 1}};
    auto x = solve_consistent(RR, md, {2.0, 3.0, 5.0});
    CHECK(x[0] == doctest::Approx(2.0));
    CHECK(kind_of([&] { (void)solve_consistent(RR, md, {2.0, 3.0, 5.1}); }) == ErrorKind::Inconsistent);
}

TEST_CASE("scalar parsing and formatting") {
    CHECK(parse_scalar<Rational>("3/6") == q(1, 2));
    CHECK(parse_scalar<Rational>("2.5") == q(5, 2));
    CHECK(parse_scalar<Rational>("1e-3") == q(1, 1000));
    CHECK(parse_scalar<double>("1/4") == 0.25);
    CHECK(format_scalar(q(-4, 6)) == "-2/3");
    CHECK(format_scalar(Rational(7)) == "7");
    CHECK(kind_of([] { (void)parse_scalar<Rational>("abc"); }) == ErrorKind::ParseError);
    CHECK(exact_sqrt(q(9, 4)) == q(3, 2));
    CHECK_FALSE(exact_sqrt(Rational(2)).has_value());
}

TEST_CASE("float field thresholds scale with magnitude") {
    CHECK(RR.is_zero(1e-12));
    CHECK_FALSE(RR.is_zero(1e-6));
    CHECK(RR.is_zero(1e-3, 1e8));
    CHECK(RR.equal(1.0, 1.0 + 1e-13));
}
