#include "ominv/semialg/mpoly.hpp"
#include "ominv/error.hpp"

#include <sstream>

namespace ominv {

Monomial Monomial::var(const std::string &v, unsigned e) {
    Monomial m;
    if (e > 0)
        m.f.emplace_back(v, e);
    return m;
}

unsigned Monomial::degree() const {
    unsigned d = 0;
    for (auto &p : f)
        d += p.second;
    return d;
}

unsigned Monomial::degree_in(const std::string &v) const {
    for (auto &p : f)
        if (p.first == v)
            return p.second;
    return 0;
}

Monomial Monomial::operator*(const Monomial &o) const {
    Monomial r;
    size_t i = 0, j = 0;
    while (i < f.size() || j < o.f.size()) {
        if (j == o.f.size() || (i < f.size() && f[i].first < o.f[j].first))
            r.f.push_back(f[i++]);
        else if (i == f.size() || o.f[j].first < f[i].first)
            r.f.push_back(o.f[j++]);
        else {
            r.f.emplace_back(f[i].first, f[i].second + o.f[j].second);
            ++i;
            ++j;
        }
    }
    return r;
}

bool Monomial::operator<(const Monomial &o) const {
    unsigned a = degree(), b = o.degree();
    if (a != b)
        return a > b;
    return f < o.f;
}

MPoly::MPoly(const Rational &c) {
    if (c != 0)
        t_[Monomial{}] = c;
}

MPoly MPoly::var(const std::string &v) { return term(Rational(1), Monomial::var(v)); }

MPoly MPoly::term(const Rational &c, const Monomial &m) {
    MPoly p;
    if (c != 0)
        p.t_[m] = c;
    return p;
}

MPoly MPoly::from_qpoly(const QPoly &q, const std::string &v) {
    MPoly p;
    for (size_t i = 0; i < q.coeffs().size(); ++i)
        p.add_term(Monomial::var(v, static_cast<unsigned>(i)), q.coeffs()[i]);
    return p;
}

bool MPoly::is_constant() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first.f.empty()); }

Rational MPoly::constant_term() const {
    auto it = t_.find(Monomial{});
    return it == t_.end() ? Rational(0) : it->second;
}

unsigned MPoly::degree() const {
    unsigned d = 0;
    for (auto &[m, c] : t_)
        d = std::max(d, m.degree());
    return d;
}

unsigned MPoly::degree_in(const std::string &v) const {
    unsigned d = 0;
    for (auto &[m, c] : t_)
        d = std::max(d, m.degree_in(v));
    return d;
}

std::set<std::string> MPoly::vars() const {
    std::set<std::string> s;
    for (auto &[m, c] : t_)
        for (auto &p : m.f)
            s.insert(p.first);
    return s;
}

void MPoly::add_term(const Monomial &m, const Rational &c) {
    if (c == 0)
        return;
    auto it = t_.find(m);
    if (it == t_.end()) {
        t_.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second == 0)
        t_.erase(it);
}

MPoly MPoly::operator-() const {
    MPoly r = *this;
    for (auto &kv : r.t_)
        kv.second = -kv.second;
    return r;
}

MPoly &MPoly::operator+=(const MPoly &o) {
    for (auto &[m, c] : o.t_)
        add_term(m, c);
    return *this;
}

MPoly &MPoly::operator-=(const MPoly &o) {
    for (auto &[m, c] : o.t_)
        add_term(m, -c);
    return *this;
}

MPoly operator*(const MPoly &a, const MPoly &b) {
    MPoly r;
    for (auto &[ma, ca] : a.t_)
        for (auto &[mb, cb] : b.t_)
            r.add_term(ma * mb, ca * cb);
    return r;
}

MPoly &MPoly::operator*=(const MPoly &o) {
    *this = *this * o;
    return *this;
}

MPoly &MPoly::operator*=(const Rational &c) {
    if (c == 0) {
        t_.clear();
        return *this;
    }
    for (auto &kv : t_)
        kv.second *= c;
    return *this;
}

MPoly MPoly::pow(unsigned e) const {
    MPoly r(1), b = *this;
    while (e) {
        if (e & 1)
            r *= b;
        e >>= 1;
        if (e)
            b *= b;
    }
    return r;
}

MPoly MPoly::primitive() const {
    if (t_.empty())
        return *this;
    Integer l = 1, g = 0;
    for (auto &[m, c] : t_)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    MPoly r = *this;
    for (auto &kv : r.t_) {
        kv.second *= Rational(l);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), kv.second.get_num_mpz_t());
    }
    for (auto &kv : r.t_)
        kv.second /= Rational(g);
    return r;
}

Rational MPoly::eval(const std::map<std::string, Rational> &pt) const {
    Rational acc = 0;
    for (auto &[m, c] : t_) {
        Rational v = c;
        for (auto &[x, e] : m.f) {
            auto it = pt.find(x);
            if (it == pt.end())
                fail(ErrorCode::UnboundVariable, x);
            v *= pow_rat(it->second, e);
        }
        acc += v;
    }
    return acc;
}

NFElem MPoly::eval(const std::map<std::string, NFElem> &pt, const FieldPtr &K) const {
    NFElem acc(K, Rational(0));
    for (auto &[m, c] : t_) {
        NFElem v(K, c);
        for (auto &[x, e] : m.f) {
            auto it = pt.find(x);
            if (it == pt.end())
                fail(ErrorCode::UnboundVariable, x);
            v *= it->second.pow(e);
        }
        acc += v;
    }
    return acc;
}

MPoly MPoly::substitute(const std::map<std::string, MPoly> &subs) const {
    MPoly r;
    std::map<std::pair<std::string, unsigned>, MPoly> cache;
    for (auto &[m, c] : t_) {
        MPoly v(c);
        Monomial keep;
        for (auto &[x, e] : m.f) {
            auto it = subs.find(x);
            if (it == subs.end()) {
                keep.f.emplace_back(x, e);
                continue;
            }
            auto key = std::make_pair(x, e);
            auto ci = cache.find(key);
            if (ci == cache.end())
                ci = cache.emplace(key, it->second.pow(e)).first;
            v *= ci->second;
        }
        v *= term(Rational(1), keep);
        r += v;
    }
    return r;
}

std::string MPoly::to_sexpr() const {
    std::ostringstream os;
    os << "(poly";
    for (auto &[m, c] : t_) {
        os << " (" << ominv::to_string(c);
        for (auto &[x, e] : m.f)
            os << " (" << x << " " << e << ")";
        os << ")";
    }
    os << ")";
    return os.str();
}

std::string MPoly::to_string() const {
    if (t_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (auto &[m, c] : t_) {
        Rational a = c;
        if (!first)
            os << (a < 0 ? " - " : " + ");
        else if (a < 0)
            os << "-";
        if (a < 0)
            a = -a;
        bool unit = a == 1 && !m.f.empty();
        if (!unit)
            os << ominv::to_string(a);
        for (size_t i = 0; i < m.f.size(); ++i) {
            if (i > 0 || !unit)
                os << "*";
            os << m.f[i].first;
            if (m.f[i].second > 1)
                os << "^" << m.f[i].second;
        }
        first = false;
    }
    return os.str();
}

CompiledPoly::CompiledPoly(const MPoly &p, const std::vector<std::string> &order) {
    for (auto &[m, c] : p.terms()) {
        Term t{c, {}};
        for (auto &[x, e] : m.f) {
            size_t idx = order.size();
            for (size_t i = 0; i < order.size(); ++i)
                if (order[i] == x) {
                    idx = i;
                    break;
                }
            if (idx == order.size())
                fail(ErrorCode::UnboundVariable, x);
            t.f.emplace_back(idx, e);
        }
        terms_.push_back(std::move(t));
    }
}

Interval CompiledPoly::eval(const std::vector<Interval> &x) const {
    Interval acc(0);
    for (auto &t : terms_) {
        Interval v(t.c);
        for (auto &[i, e] : t.f)
            v *= pow_int(x[i], e);
        acc += v;
    }
    return acc;
}

Rational CompiledPoly::eval(const std::vector<Rational> &x) const {
    Rational acc = 0;
    for (auto &t : terms_) {
        Rational v = t.c;
        for (auto &[i, e] : t.f)
            v *= pow_rat(x[i], e);
        acc += v;
    }
    return acc;
}

} // namespace ominv
