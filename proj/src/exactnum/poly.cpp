#include "ominv/exactnum/poly.hpp"
#include "ominv/error.hpp"

#include <algorithm>
#include <sstream>

namespace ominv {

QPoly::QPoly(std::vector<Rational> c) : c_(std::move(c)) { trim(); }

QPoly::QPoly(std::initializer_list<long> c) {
    for (long v : c)
        c_.emplace_back(v);
    trim();
}

void QPoly::trim() {
    while (!c_.empty() && c_.back() == 0)
        c_.pop_back();
}

QPoly QPoly::constant(const Rational &c) { return QPoly(std::vector<Rational>{c}); }

QPoly QPoly::monomial(const Rational &c, size_t k) {
    std::vector<Rational> v(k + 1);
    v[k] = c;
    return QPoly(std::move(v));
}

QPoly QPoly::operator-() const {
    QPoly r = *this;
    for (auto &x : r.c_)
        x = -x;
    return r;
}

QPoly &QPoly::operator+=(const QPoly &o) {
    if (o.c_.size() > c_.size())
        c_.resize(o.c_.size());
    for (size_t i = 0; i < o.c_.size(); ++i)
        c_[i] += o.c_[i];
    trim();
    return *this;
}

QPoly &QPoly::operator-=(const QPoly &o) {
    if (o.c_.size() > c_.size())
        c_.resize(o.c_.size());
    for (size_t i = 0; i < o.c_.size(); ++i)
        c_[i] -= o.c_[i];
    trim();
    return *this;
}

QPoly &QPoly::operator*=(const QPoly &o) {
    if (c_.empty() || o.c_.empty()) {
        c_.clear();
        return *this;
    }
    std::vector<Rational> r(c_.size() + o.c_.size() - 1);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0)
            continue;
        for (size_t j = 0; j < o.c_.size(); ++j)
            r[i + j] += c_[i] * o.c_[j];
    }
    c_ = std::move(r);
    trim();
    return *this;
}

QPoly &QPoly::operator*=(const Rational &r) {
    if (r == 0) {
        c_.clear();
        return *this;
    }
    for (auto &x : c_)
        x *= r;
    return *this;
}

Rational QPoly::eval(const Rational &x) const {
    Rational acc = 0;
    for (size_t i = c_.size(); i-- > 0;)
        acc = acc * x + c_[i];
    return acc;
}

QPoly QPoly::derivative() const {
    if (c_.size() <= 1)
        return QPoly();
    std::vector<Rational> r(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i)
        r[i - 1] = c_[i] * static_cast<long>(i);
    return QPoly(std::move(r));
}

QPoly QPoly::monic() const {
    if (c_.empty())
        return *this;
    QPoly r = *this;
    Rational inv = 1 / lc();
    for (auto &x : r.c_)
        x *= inv;
    return r;
}

QPoly QPoly::compose(const QPoly &inner) const {
    QPoly acc;
    for (size_t i = c_.size(); i-- > 0;) {
        acc *= inner;
        acc += constant(c_[i]);
    }
    return acc;
}

QPoly QPoly::shift(const Rational &a) const {
    // Taylor shift by repeated synthetic division.
    std::vector<Rational> r = c_;
    size_t n = r.size();
    for (size_t i = 0; i + 1 < n; ++i)
        for (size_t j = n - 1; j > i; --j)
            r[j - 1] += a * r[j];
    return QPoly(std::move(r));
}

QPoly QPoly::scale(const Rational &a) const {
    std::vector<Rational> r = c_;
    Rational p = 1;
    for (auto &x : r) {
        x *= p;
        p *= a;
    }
    return QPoly(std::move(r));
}

QPoly QPoly::reversed() const {
    std::vector<Rational> r(c_.rbegin(), c_.rend());
    return QPoly(std::move(r));
}

QPoly QPoly::negate_var() const {
    std::vector<Rational> r = c_;
    for (size_t i = 1; i < r.size(); i += 2)
        r[i] = -r[i];
    return QPoly(std::move(r));
}

QPoly QPoly::pow(unsigned e) const {
    QPoly r = constant(1), b = *this;
    while (e) {
        if (e & 1)
            r *= b;
        e >>= 1;
        if (e)
            b *= b;
    }
    return r;
}

std::string QPoly::to_string(const std::string &var) const {
    if (c_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = c_.size(); i-- > 0;) {
        if (c_[i] == 0)
            continue;
        Rational a = c_[i];
        if (!first)
            os << (a < 0 ? " - " : " + ");
        else if (a < 0)
            os << "-";
        Rational m = rat_abs(a);
        if (i == 0 || m != 1) {
            os << ominv::to_string(m);
            if (i > 0)
                os << "*";
        }
        if (i >= 1)
            os << var;
        if (i >= 2)
            os << "^" << i;
        first = false;
    }
    return os.str();
}

std::string QPoly::to_list_string() const {
    std::string s = "[";
    for (size_t i = 0; i < c_.size(); ++i) {
        if (i)
            s += ",";
        s += "\"" + ominv::to_string(c_[i]) + "\"";
    }
    return s + "]";
}

std::pair<QPoly, QPoly> divmod(const QPoly &a, const QPoly &b) {
    if (b.is_zero())
        fail(ErrorCode::DivisionByZero, "polynomial division by zero");
    std::vector<Rational> r = a.coeffs();
    int db = b.degree();
    if (a.degree() < db)
        return {QPoly(), a};
    std::vector<Rational> q(a.degree() - db + 1);
    Rational inv = 1 / b.lc();
    for (int i = a.degree(); i >= db; --i) {
        if (r[i] == 0)
            continue;
        Rational f = r[i] * inv;
        q[i - db] = f;
        for (int j = 0; j <= db; ++j)
            r[i - db + j] -= f * b.coeffs()[j];
    }
    r.resize(db);
    return {QPoly(std::move(q)), QPoly(std::move(r))};
}

QPoly operator/(const QPoly &a, const QPoly &b) { return divmod(a, b).first; }
QPoly operator%(const QPoly &a, const QPoly &b) { return divmod(a, b).second; }

// Euclid on primitive integer images keeps coefficients small.
QPoly gcd(const QPoly &a, const QPoly &b) {
    if (a.is_zero())
        return b.monic();
    if (b.is_zero())
        return a.monic();
    QPoly x = to_qpoly(primitive_z(a)), y = to_qpoly(primitive_z(b));
    if (x.degree() < y.degree())
        std::swap(x, y);
    while (!y.is_zero()) {
        QPoly r = x % y;
        x = std::move(y);
        y = r.is_zero() ? r : to_qpoly(primitive_z(r));
    }
    return x.monic();
}

std::tuple<QPoly, QPoly, QPoly> ext_gcd(const QPoly &a, const QPoly &b) {
    QPoly r0 = a, r1 = b, s0 = QPoly::constant(1), s1, t0, t1 = QPoly::constant(1);
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        QPoly s2 = s0 - q * s1, t2 = t0 - q * t1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero())
        return {r0, s0, t0};
    Rational inv = 1 / r0.lc();
    return {r0 * inv, s0 * inv, t0 * inv};
}

QPoly squarefree_part(const QPoly &p) {
    if (p.degree() <= 0)
        return p.is_zero() ? p : QPoly::constant(1);
    QPoly g = gcd(p, p.derivative());
    return (p / g).monic();
}

ZPoly::ZPoly(std::vector<Integer> coeffs) : c(std::move(coeffs)) { trim(); }

void ZPoly::trim() {
    while (!c.empty() && c.back() == 0)
        c.pop_back();
}

bool ZPoly::operator<(const ZPoly &o) const {
    if (c.size() != o.c.size())
        return c.size() < o.c.size();
    for (size_t i = c.size(); i-- > 0;)
        if (c[i] != o.c[i])
            return c[i] < o.c[i];
    return false;
}

std::string ZPoly::to_list_string() const {
    std::string s = "[";
    for (size_t i = 0; i < c.size(); ++i) {
        if (i)
            s += ",";
        s += c[i].get_str();
    }
    return s + "]";
}

QPoly to_qpoly(const ZPoly &p) {
    std::vector<Rational> v(p.c.begin(), p.c.end());
    return QPoly(std::move(v));
}

Integer content(const ZPoly &p) {
    Integer g = 0;
    for (const auto &x : p.c)
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    return g;
}

ZPoly primitive_z(const ZPoly &p) {
    if (p.is_zero())
        return p;
    Integer g = content(p);
    if (p.lc() < 0)
        g = -g;
    ZPoly r = p;
    for (auto &x : r.c)
        mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    return r;
}

ZPoly primitive_z(const QPoly &p) {
    if (p.is_zero())
        return ZPoly();
    Integer l = 1;
    for (const auto &x : p.coeffs())
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    std::vector<Integer> v;
    v.reserve(p.coeffs().size());
    for (const auto &x : p.coeffs()) {
        Rational y = x * l;
        v.push_back(y.get_num());
    }
    return primitive_z(ZPoly(std::move(v)));
}

ZPoly zmul(const ZPoly &a, const ZPoly &b) {
    if (a.is_zero() || b.is_zero())
        return ZPoly();
    std::vector<Integer> r(a.c.size() + b.c.size() - 1);
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j)
            r[i + j] += a.c[i] * b.c[j];
    return ZPoly(std::move(r));
}

bool zdivides(const ZPoly &a, const ZPoly &b, ZPoly *quot) {
    if (b.is_zero())
        return false;
    if (a.is_zero()) {
        if (quot)
            *quot = ZPoly();
        return true;
    }
    if (a.degree() < b.degree())
        return false;
    std::vector<Integer> r = a.c;
    int db = b.degree();
    std::vector<Integer> q(a.degree() - db + 1);
    for (int i = a.degree(); i >= db; --i) {
        if (r[i] == 0)
            continue;
        if (!mpz_divisible_p(r[i].get_mpz_t(), b.lc().get_mpz_t()))
            return false;
        Integer f;
        mpz_divexact(f.get_mpz_t(), r[i].get_mpz_t(), b.lc().get_mpz_t());
        q[i - db] = f;
        for (int j = 0; j <= db; ++j)
            r[i - db + j] -= f * b.c[j];
    }
    for (int i = 0; i < db; ++i)
        if (r[i] != 0)
            return false;
    if (quot)
        *quot = ZPoly(std::move(q));
    return true;
}

static std::vector<std::string> split_list(const std::string &text) {
    std::string t;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch)) && ch != '"')
            t += ch;
    if (t.size() < 2 || t.front() != '[' || t.back() != ']')
        fail(ErrorCode::ParseError, "coefficient list must be of the form [c0,c1,...]");
    t = t.substr(1, t.size() - 2);
    std::vector<std::string> out;
    if (t.empty())
        return out;
    size_t start = 0;
    while (true) {
        size_t comma = t.find(',', start);
        out.push_back(t.substr(start, comma - start));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return out;
}

ZPoly parse_zpoly(const std::string &text) {
    std::vector<Integer> c;
    for (const auto &s : split_list(text)) {
        Rational q = parse_rational(s);
        if (q.get_den() != 1)
            fail(ErrorCode::ParseError, "integer coefficient expected, got " + s);
        c.push_back(q.get_num());
    }
    return ZPoly(std::move(c));
}

QPoly parse_qpoly(const std::string &text) {
    std::vector<Rational> c;
    for (const auto &s : split_list(text))
        c.push_back(parse_rational(s));
    return QPoly(std::move(c));
}

static QPoly positive_rescale(const QPoly &p) {
    QPoly q = to_qpoly(primitive_z(p));
    return sgn(q.lc()) == sgn(p.lc()) ? q : -q;
}

std::vector<QPoly> sturm_sequence(const QPoly &p) {
    std::vector<QPoly> seq;
    QPoly f = squarefree_part(p);
    if (f.is_zero())
        return seq;
    seq.push_back(positive_rescale(f));
    QPoly d = f.derivative();
    if (d.is_zero())
        return seq;
    seq.push_back(positive_rescale(d));
    while (true) {
        QPoly r = seq[seq.size() - 2] % seq.back();
        if (r.is_zero())
            break;
        seq.push_back(-positive_rescale(r));
    }
    return seq;
}

static int variations(const std::vector<int> &signs) {
    int v = 0, last = 0;
    for (int s : signs) {
        if (s == 0)
            continue;
        if (last != 0 && s != last)
            ++v;
        last = s;
    }
    return v;
}

int sign_variations(const std::vector<QPoly> &seq, const Rational &x) {
    std::vector<int> s;
    s.reserve(seq.size());
    for (const auto &p : seq)
        s.push_back(p.sign_at(x));
    return variations(s);
}

int sign_variations_at_infinity(const std::vector<QPoly> &seq, bool positive) {
    std::vector<int> s;
    for (const auto &p : seq) {
        int sg = sgn(p.lc());
        if (!positive && (p.degree() % 2 == 1))
            sg = -sg;
        s.push_back(sg);
    }
    return variations(s);
}

int count_real_roots(const std::vector<QPoly> &seq, const Rational &a, const Rational &b) {
    if (seq.empty() || !(a < b))
        return 0;
    return sign_variations(seq, a) - sign_variations(seq, b);
}

int count_all_real_roots(const QPoly &p) {
    auto seq = sturm_sequence(p);
    if (seq.empty())
        return 0;
    return sign_variations_at_infinity(seq, false) - sign_variations_at_infinity(seq, true);
}

Rational root_bound(const QPoly &p) {
    // Cauchy: 1 + max |a_i / a_n|
    Rational m = 0;
    for (int i = 0; i < p.degree(); ++i) {
        Rational r = rat_abs(p.coeffs()[i] / p.lc());
        if (r > m)
            m = r;
    }
    // round up to a power of two for tidy endpoints
    Rational b = 1 + m, two = 1;
    while (two < b)
        two *= 2;
    return two;
}

std::vector<Rational> power_sums(const QPoly &p, size_t n) {
    int d = p.degree();
    std::vector<Rational> ps(n + 1);
    ps[0] = d;
    const auto &c = p.coeffs(); // monic assumed
    for (size_t k = 1; k <= n; ++k) {
        Rational acc = 0;
        for (size_t i = 1; i <= std::min<size_t>(k - 1, d); ++i)
            acc -= c[d - i] * ps[k - i];
        if (k <= static_cast<size_t>(d))
            acc -= Rational(static_cast<long>(k)) * c[d - k];
        ps[k] = acc;
    }
    return ps;
}

QPoly from_power_sums(const std::vector<Rational> &ps, size_t n) {
    std::vector<Rational> e(n + 1);
    e[0] = 1;
    for (size_t k = 1; k <= n; ++k) {
        Rational acc = 0;
        for (size_t i = 1; i <= k; ++i) {
            Rational term = e[k - i] * ps[i];
            if (i % 2 == 1)
                acc += term;
            else
                acc -= term;
        }
        e[k] = acc / static_cast<long>(k);
    }
    std::vector<Rational> c(n + 1);
    for (size_t k = 0; k <= n; ++k)
        c[n - k] = (k % 2 == 0) ? e[k] : Rational(-e[k]);
    return QPoly(std::move(c));
}

QPoly sum_poly(const QPoly &a, const QPoly &b) {
    size_t n = static_cast<size_t>(a.degree()) * static_cast<size_t>(b.degree());
    auto pa = power_sums(a.monic(), n), pb = power_sums(b.monic(), n);
    std::vector<Rational> fa(n + 1), fb(n + 1);
    for (size_t k = 0; k <= n; ++k) {
        Rational f(factorial(k));
        fa[k] = pa[k] / f;
        fb[k] = pb[k] / f;
    }
    std::vector<Rational> s(n + 1);
    for (size_t k = 0; k <= n; ++k) {
        Rational acc = 0;
        for (size_t t = 0; t <= k; ++t)
            acc += fa[t] * fb[k - t];
        s[k] = acc * Rational(factorial(k));
    }
    return from_power_sums(s, n);
}

QPoly product_poly(const QPoly &a, const QPoly &b) {
    size_t n = static_cast<size_t>(a.degree()) * static_cast<size_t>(b.degree());
    auto pa = power_sums(a.monic(), n), pb = power_sums(b.monic(), n);
    std::vector<Rational> s(n + 1);
    for (size_t k = 0; k <= n; ++k)
        s[k] = pa[k] * pb[k];
    return from_power_sums(s, n);
}

} // namespace ominv
