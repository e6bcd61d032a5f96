#include "ominv/exactnum/rational.hpp"
#include "ominv/error.hpp"

#include <cctype>

namespace ominv {

const char *error_code_name(ErrorCode c) {
    switch (c) {
    case ErrorCode::DegreeCapExceeded: return "DegreeCapExceeded";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::BackendDisagreement: return "BackendDisagreement";
    case ErrorCode::NoCertificate: return "NoCertificate";
    case ErrorCode::NotOnTorus: return "NotOnTorus";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::PrecisionUnreachable: return "PrecisionUnreachable";
    case ErrorCode::BelowThreshold: return "BelowThreshold";
    case ErrorCode::SearchExhausted: return "SearchExhausted";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::Internal: return "Internal";
    }
    return "Error";
}

static bool valid_integer_text(std::string_view s) {
    if (s.empty())
        return false;
    size_t i = 0;
    if (s[0] == '-' || s[0] == '+')
        i = 1;
    if (i == s.size())
        return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            return false;
    return true;
}

static Integer parse_integer(std::string_view s) {
    if (!valid_integer_text(s))
        fail(ErrorCode::ParseError, "not an integer: '" + std::string(s) + "'");
    std::string t(s[0] == '+' ? s.substr(1) : s);
    return Integer(t, 10);
}

Rational parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
        text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        text.remove_suffix(1);
    auto slash = text.find('/');
    Rational q;
    if (slash == std::string_view::npos) {
        q = Rational(parse_integer(text));
    } else {
        Integer n = parse_integer(text.substr(0, slash));
        Integer d = parse_integer(text.substr(slash + 1));
        if (d == 0)
            fail(ErrorCode::DivisionByZero, "zero denominator in '" + std::string(text) + "'");
        q = Rational(n, d);
        q.canonicalize();
    }
    return q;
}

std::string to_string(const Integer &z) { return z.get_str(10); }

std::string to_string(const Rational &q) {
    if (q.get_den() == 1)
        return q.get_num().get_str(10);
    return q.get_num().get_str(10) + "/" + q.get_den().get_str(10);
}

std::string to_string(const RatVec &v) {
    std::string out = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ",";
        out += to_string(v[i]);
    }
    return out + "]";
}

Rational make_rational(long num, long den) {
    if (den == 0)
        fail(ErrorCode::DivisionByZero, "make_rational");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational rat_abs(const Rational &q) { return q < 0 ? Rational(-q) : q; }
int sign(const Rational &q) { return sgn(q); }
int sign(const Integer &z) { return sgn(z); }

Integer floor_rat(const Rational &q) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Integer ceil_rat(const Rational &q) {
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Rational pow2(long e) {
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
    if (e >= 0)
        return Rational(p);
    return Rational(Integer(1), p);
}

Rational pow_rat(const Rational &base, unsigned long e) {
    Integer n, d;
    mpz_pow_ui(n.get_mpz_t(), base.get_num_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), base.get_den_mpz_t(), e);
    return Rational(n, d);
}

Rational dyadic_floor(const Rational &q, unsigned k) {
    Rational scaled = q * pow2(k);
    return Rational(floor_rat(scaled)) * pow2(-static_cast<long>(k));
}

Rational dyadic_ceil(const Rational &q, unsigned k) {
    Rational scaled = q * pow2(k);
    return Rational(ceil_rat(scaled)) * pow2(-static_cast<long>(k));
}

Integer factorial(unsigned long n) {
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

Integer binomial(unsigned long n, unsigned long k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

} // namespace ominv
