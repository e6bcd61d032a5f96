#include "ominv/error.hpp"
#include "ominv/reduction/reduction.hpp"

#include <sstream>

namespace ominv {

using nlohmann::json;

namespace {

Rational parse_rat_json(const json &j) {
    if (j.is_number_integer())
        return Rational(j.get<long>());
    require(j.is_string(), ErrorCode::ParseError, "rational expected");
    return parse_rational(j.get<std::string>());
}

bool perfect_square(const Integer &z) { return z >= 0 && mpz_perfect_square_p(z.get_mpz_t()); }

Integer isqrt(const Integer &z) {
    Integer r;
    mpz_sqrt(r.get_mpz_t(), z.get_mpz_t());
    return r;
}

RealAlgebraic sqrt_of(const Rational &q) {
    require(q >= 0, ErrorCode::ParseError, "sqrt of a negative rational");
    if (perfect_square(q.get_num()) && perfect_square(q.get_den())) {
        Rational r(isqrt(q.get_num()), isqrt(q.get_den()));
        r.canonicalize();
        return RealAlgebraic(r);
    }
    QPoly p({-q, Rational(0), Rational(1)});
    return RealAlgebraic::from_poly_interval(p, Rational(0), q + 1);
}

} // namespace

RealAlgebraic parse_algebraic(const json &j) {
    if (j.is_number_integer())
        return RealAlgebraic(Rational(j.get<long>()));
    if (j.is_object()) {
        require(j.contains("minpoly") && j.contains("interval"), ErrorCode::ParseError,
                "algebraic object needs minpoly and interval");
        std::vector<Rational> c;
        for (auto &x : j.at("minpoly"))
            c.push_back(parse_rat_json(x));
        auto &iv = j.at("interval");
        require(iv.is_array() && iv.size() == 2, ErrorCode::ParseError, "interval must have two endpoints");
        QPoly p(c);
        require(p.degree() >= 1, ErrorCode::ParseError, "minpoly must be nonconstant");
        try {
            return RealAlgebraic::from_poly_interval(p, parse_rat_json(iv[0]), parse_rat_json(iv[1]));
        } catch (const Error &e) {
            fail(ErrorCode::ParseError, std::string("bad algebraic number: ") + e.what());
        }
    }
    require(j.is_string(), ErrorCode::ParseError, "algebraic number expected");
    std::string s = j.get<std::string>();
    s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
    bool neg = false;
    std::string body = s;
    if (!body.empty() && body[0] == '-' && body.rfind("-sqrt(", 0) == 0) {
        neg = true;
        body = body.substr(1);
    }
    if (body.rfind("sqrt(", 0) == 0) {
        require(body.back() == ')', ErrorCode::ParseError, "unterminated sqrt");
        RealAlgebraic r = sqrt_of(parse_rational(body.substr(5, body.size() - 6)));
        return neg ? alg_neg(r) : r;
    }
    try {
        return RealAlgebraic(parse_rational(s));
    } catch (const Error &) {
        fail(ErrorCode::ParseError, "not an algebraic number: " + s);
    }
}

ExponentialPolynomial ExponentialPolynomial::from_json(const json &j) {
    require(j.is_object() && j.contains("terms") && j.contains("t0"), ErrorCode::ParseError,
            "exponential polynomial needs terms and t0");
    ExponentialPolynomial f;
    for (auto &term : j.at("terms")) {
        require(term.is_array() && term.size() == 2, ErrorCode::ParseError, "term must be [coeff, rate]");
        f.a.push_back(parse_algebraic(term[0]));
        f.rho.push_back(parse_algebraic(term[1]));
    }
    f.t0 = parse_rat_json(j.at("t0"));
    require(f.t0 >= 0, ErrorCode::ParseError, "t0 must be nonnegative");
    return f;
}

ExponentialPolynomial ExponentialPolynomial::parse(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception &e) {
        fail(ErrorCode::ParseError, e.what());
    }
    return from_json(j);
}

static json alg_json(const RealAlgebraic &x) {
    if (x.is_rational())
        return to_string(x.rational_value());
    return json::parse(x.to_json());
}

json ExponentialPolynomial::to_json() const {
    json terms = json::array();
    for (size_t i = 0; i < a.size(); ++i)
        terms.push_back({alg_json(a[i]), alg_json(rho[i])});
    return {{"terms", terms}, {"t0", ominv::to_string(t0)}};
}

ExponentialPolynomial ExponentialPolynomial::normalize(Rational *shift) const {
    ExponentialPolynomial g;
    g.t0 = t0;
    for (size_t i = 0; i < a.size(); ++i) {
        size_t j = 0;
        while (j < g.rho.size() && !alg_equal(g.rho[j], rho[i]))
            ++j;
        if (j == g.rho.size()) {
            g.rho.push_back(rho[i]);
            g.a.push_back(a[i]);
        } else {
            g.a[j] = alg_arith(g.a[j], ArithOp::Add, a[i]);
        }
    }
    ExponentialPolynomial h;
    h.t0 = t0;
    for (size_t i = 0; i < g.a.size(); ++i)
        if (alg_sign(g.a[i]) != 0) {
            h.a.push_back(g.a[i]);
            h.rho.push_back(g.rho[i]);
        }
    Rational s(0);
    if (!h.rho.empty()) {
        RealAlgebraic m = h.rho[0];
        for (auto &r : h.rho)
            if (alg_compare(r, m) == Ordering::LT)
                m = r;
        if (alg_sign(m) <= 0)
            s = Rational(floor_rat(-m.approx(Rational(1, 1024)) + Rational(1, 1024)) + 1);
        while (alg_sign(alg_arith(m, ArithOp::Add, RealAlgebraic(s))) <= 0)
            s += 1;
        if (s != 0)
            for (auto &r : h.rho)
                r = alg_arith(r, ArithOp::Add, RealAlgebraic(s));
    }
    if (shift)
        *shift = s;
    return h;
}

Interval ExponentialPolynomial::eval(const Interval &t) const {
    Interval s(0);
    for (size_t i = 0; i < a.size(); ++i)
        s += enclose(a[i]) * exp(enclose(rho[i]) * t);
    return s;
}

Interval ExponentialPolynomial::derivative(const Interval &t) const {
    Interval s(0);
    for (size_t i = 0; i < a.size(); ++i) {
        Interval r = enclose(rho[i]);
        s += enclose(a[i]) * r * exp(r * t);
    }
    return s;
}

std::string ExponentialPolynomial::to_string() const {
    std::ostringstream os;
    for (size_t i = 0; i < a.size(); ++i)
        os << (i ? " + " : "") << "(" << a[i].to_string() << ") e^(" << rho[i].to_string() << " t)";
    if (a.empty())
        os << "0";
    os << " on [0, " << ominv::to_string(t0) << "]";
    return os.str();
}

} // namespace ominv
