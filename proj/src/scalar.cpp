#include "bochner/scalar.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

#include "bochner/error.hpp"

namespace bochner {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::PreconditionViolated: return "PreconditionViolated";
        case ErrorKind::DuplicateAbscissa: return "DuplicateAbscissa";
        case ErrorKind::FullRank: return "FullRank";
        case ErrorKind::Inconsistent: return "Inconsistent";
        case ErrorKind::Underdetermined: return "Underdetermined";
        case ErrorKind::NotConic: return "NotConic";
        case ErrorKind::NotBiquadratic: return "NotBiquadratic";
        case ErrorKind::Degenerate: return "Degenerate";
        case ErrorKind::ModulusNotRepresentable: return "ModulusNotRepresentable";
        case ErrorKind::StepDegenerate: return "StepDegenerate";
        case ErrorKind::DistinctnessViolated: return "DistinctnessViolated";
        case ErrorKind::SpectrumDegenerate: return "SpectrumDegenerate";
        case ErrorKind::DegreeCollapse: return "DegreeCollapse";
        case ErrorKind::IrreducibilityViolated: return "IrreducibilityViolated";
        case ErrorKind::DegenerateWindow: return "DegenerateWindow";
        case ErrorKind::NotPolynomial: return "NotPolynomial";
        case ErrorKind::WindowDegenerate: return "WindowDegenerate";
        case ErrorKind::NotTriangular: return "NotTriangular";
        case ErrorKind::ZeroFactor: return "ZeroFactor";
        case ErrorKind::NullNorm: return "NullNorm";
        case ErrorKind::NotEigenvalue: return "NotEigenvalue";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

std::optional<Rational> exact_sqrt(const Rational& x) {
    if (sgn(x) < 0) return std::nullopt;
    const mpz_class& num = x.get_num();
    const mpz_class& den = x.get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) == 0 || mpz_perfect_square_p(den.get_mpz_t()) == 0) {
        return std::nullopt;
    }
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    Rational r(rn, rd);
    r.canonicalize();
    return r;
}

std::string format_scalar(const Rational& x) {
    Rational c = x;
    c.canonicalize();
    return c.get_str();
}

std::string format_scalar(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad_literal(std::string_view text) {
    throw Error(ErrorKind::ParseError, "not a scalar literal: '" + std::string(text) + "'");
}

// Exact value of a decimal literal such as "-12.5e-3".
Rational parse_decimal(std::string_view text) {
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    std::string digits;
    long frac_digits = 0;
    bool seen_point = false;
    bool any_digit = false;
    std::size_t i = 0;
    for (; i < s.size(); ++i) {
        char ch = s[i];
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            digits.push_back(ch);
            any_digit = true;
            if (seen_point) ++frac_digits;
        } else if (ch == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!any_digit) bad_literal(text);
    long exponent = 0;
    if (i < s.size()) {
        if (s[i] != 'e' && s[i] != 'E') bad_literal(text);
        std::string_view e = s.substr(i + 1);
        if (e.empty()) bad_literal(text);
        if (e.front() == '+') e.remove_prefix(1);
        auto res = std::from_chars(e.data(), e.data() + e.size(), exponent);
        if (res.ec != std::errc() || res.ptr != e.data() + e.size()) bad_literal(text);
    }
    mpz_class num(digits, 10);
    long shift = exponent - frac_digits;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    Rational r = shift < 0 ? Rational(num, scale) : Rational(num * scale, 1);
    r.canonicalize();
    return negative ? Rational(-r) : r;
}

}  // namespace

template <>
Rational parse_scalar<Rational>(std::string_view text) {
    std::string_view s = trim(text);
    if (s.empty()) bad_literal(text);
    auto slash = s.find('/');
    if (slash != std::string_view::npos) {
        Rational num = parse_decimal(trim(s.substr(0, slash)));
        Rational den = parse_decimal(trim(s.substr(slash + 1)));
        if (sgn(den) == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
        Rational r = num / den;
        r.canonicalize();
        return r;
    }
    return parse_decimal(s);
}

template <>
double parse_scalar<double>(std::string_view text) {
    std::string_view s = trim(text);
    if (s.empty()) bad_literal(text);
    auto slash = s.find('/');
    if (slash != std::string_view::npos) {
        double den = parse_scalar<double>(s.substr(slash + 1));
        if (den == 0.0) throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
        return parse_scalar<double>(s.substr(0, slash)) / den;
    }
    std::string buf(s);
    char* end = nullptr;
    double v = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size()) bad_literal(text);
    return v;
}

}  // namespace bochner
