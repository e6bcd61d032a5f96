#include "ominv/semialg/formula.hpp"
#include "ominv/error.hpp"

#include <cctype>
#include <sstream>

namespace ominv {

const char *rel_name(Rel r) {
    switch (r) {
    case Rel::Gt:
        return "gt";
    case Rel::Ge:
        return "ge";
    case Rel::Eq:
        return "eq";
    }
    return "?";
}

struct Formula::Node {
    FKind kind = FKind::True;
    MPoly p;
    Rel rel = Rel::Eq;
    std::vector<Formula> ch;
    std::vector<BoundVar> bv;
};

namespace {

std::shared_ptr<const Formula::Node> const_node(bool v) {
    static const auto t = [] {
        auto n = std::make_shared<Formula::Node>();
        n->kind = FKind::True;
        return std::shared_ptr<const Formula::Node>(n);
    }();
    static const auto f = [] {
        auto n = std::make_shared<Formula::Node>();
        n->kind = FKind::False;
        return std::shared_ptr<const Formula::Node>(n);
    }();
    return v ? t : f;
}

} // namespace

Formula::Formula() : n_(const_node(true)) {}

Formula Formula::truth(bool v) { return Formula(const_node(v)); }

Formula Formula::atom(const MPoly &p, Rel r) {
    if (p.is_constant()) {
        int s = sign(p.constant_term());
        switch (r) {
        case Rel::Gt:
            return truth(s > 0);
        case Rel::Ge:
            return truth(s >= 0);
        case Rel::Eq:
            return truth(s == 0);
        }
    }
    auto n = std::make_shared<Node>();
    n->kind = FKind::Atom;
    n->p = p.primitive();
    if (r == Rel::Eq && n->p.terms().begin()->second < 0)
        n->p = -n->p;
    n->rel = r;
    return Formula(n);
}

namespace {

Formula junction(FKind kind, std::vector<Formula> xs, const std::shared_ptr<Formula::Node> &n) {
    FKind unit = kind == FKind::And ? FKind::True : FKind::False;
    FKind absorb = kind == FKind::And ? FKind::False : FKind::True;
    std::vector<Formula> kept;
    for (auto &x : xs) {
        if (x.kind() == absorb)
            return Formula::truth(absorb == FKind::True);
        if (x.kind() != unit)
            kept.push_back(std::move(x));
    }
    if (kept.empty())
        return Formula::truth(unit == FKind::True);
    if (kept.size() == 1)
        return kept.front();
    n->kind = kind;
    n->ch = std::move(kept);
    return Formula::from_node(n);
}

} // namespace

Formula Formula::conj(std::vector<Formula> xs) { return junction(FKind::And, std::move(xs), std::make_shared<Node>()); }

Formula Formula::disj(std::vector<Formula> xs) { return junction(FKind::Or, std::move(xs), std::make_shared<Node>()); }

Formula Formula::negate(const Formula &x) {
    if (x.kind() == FKind::True || x.kind() == FKind::False)
        return truth(x.kind() == FKind::False);
    auto n = std::make_shared<Node>();
    n->kind = FKind::Not;
    n->ch = {x};
    return Formula(n);
}

Formula Formula::forall(std::vector<BoundVar> vs, const Formula &body) {
    auto n = std::make_shared<Node>();
    n->kind = FKind::Forall;
    n->bv = std::move(vs);
    n->ch = {body};
    return Formula(n);
}

Formula Formula::exists(std::vector<BoundVar> vs, const Formula &body) {
    auto n = std::make_shared<Node>();
    n->kind = FKind::Exists;
    n->bv = std::move(vs);
    n->ch = {body};
    return Formula(n);
}

FKind Formula::kind() const { return n_->kind; }
const MPoly &Formula::poly() const { return n_->p; }
Rel Formula::rel() const { return n_->rel; }
const std::vector<Formula> &Formula::children() const { return n_->ch; }
const std::vector<BoundVar> &Formula::bound() const { return n_->bv; }

bool Formula::quantifier_free() const {
    if (kind() == FKind::Forall || kind() == FKind::Exists)
        return false;
    for (auto &c : children())
        if (!c.quantifier_free())
            return false;
    return true;
}

std::set<std::string> Formula::free_vars() const {
    std::set<std::string> s;
    switch (kind()) {
    case FKind::True:
    case FKind::False:
        break;
    case FKind::Atom:
        s = poly().vars();
        break;
    case FKind::And:
    case FKind::Or:
    case FKind::Not:
        for (auto &c : children()) {
            auto t = c.free_vars();
            s.insert(t.begin(), t.end());
        }
        break;
    case FKind::Forall:
    case FKind::Exists:
        s = body().free_vars();
        for (auto &b : bound())
            s.erase(b.name);
        break;
    }
    return s;
}

size_t Formula::size() const {
    size_t n = 1;
    for (auto &c : children())
        n += c.size();
    return n;
}

std::string Formula::to_sexpr() const {
    std::ostringstream os;
    switch (kind()) {
    case FKind::True:
        return "(true)";
    case FKind::False:
        return "(false)";
    case FKind::Atom:
        return "(atom " + poly().to_sexpr() + " " + rel_name(rel()) + ")";
    case FKind::And:
    case FKind::Or:
        os << (kind() == FKind::And ? "(and" : "(or");
        for (auto &c : children())
            os << " " << c.to_sexpr();
        os << ")";
        return os.str();
    case FKind::Not:
        return "(not " + body().to_sexpr() + ")";
    case FKind::Forall:
    case FKind::Exists:
        os << (kind() == FKind::Forall ? "(forall (" : "(exists (");
        for (size_t i = 0; i < bound().size(); ++i) {
            const auto &b = bound()[i];
            os << (i ? " (" : "(") << b.name;
            if (b.bounded())
                os << " " << to_string(*b.lo) << " " << to_string(*b.hi);
            os << ")";
        }
        os << ") " << body().to_sexpr() << ")";
        return os.str();
    }
    return "";
}

namespace {

class Parser {
  public:
    explicit Parser(const std::string &s) : s_(s) {}

    Formula formula() {
        expect('(');
        std::string head = word();
        Formula out;
        if (head == "true") {
            out = Formula::truth(true);
        } else if (head == "false") {
            out = Formula::truth(false);
        } else if (head == "and" || head == "or") {
            std::vector<Formula> xs;
            while (peek() == '(')
                xs.push_back(formula());
            out = head == "and" ? Formula::conj(std::move(xs)) : Formula::disj(std::move(xs));
        } else if (head == "not") {
            out = Formula::negate(formula());
        } else if (head == "forall" || head == "exists") {
            expect('(');
            std::vector<BoundVar> vs;
            while (peek() == '(') {
                expect('(');
                BoundVar b;
                b.name = name();
                if (peek() != ')') {
                    b.lo = parse_rational(word());
                    b.hi = parse_rational(word());
                    if (*b.hi < *b.lo)
                        error("empty bound for " + b.name);
                }
                expect(')');
                vs.push_back(b);
            }
            expect(')');
            Formula body = formula();
            out = head == "forall" ? Formula::forall(vs, body) : Formula::exists(vs, body);
        } else if (head == "atom") {
            MPoly p = poly();
            std::string r = word();
            Rel rel;
            if (r == "gt")
                rel = Rel::Gt;
            else if (r == "ge")
                rel = Rel::Ge;
            else if (r == "eq")
                rel = Rel::Eq;
            else
                error("unknown relation '" + r + "'");
            out = Formula::atom(p, rel);
        } else {
            error("unknown form '" + head + "'");
        }
        expect(')');
        return out;
    }

    void finish() {
        skip();
        if (i_ < s_.size())
            error("trailing input");
    }

  private:
    MPoly poly() {
        expect('(');
        if (word() != "poly")
            error("expected poly");
        MPoly p;
        while (peek() == '(') {
            expect('(');
            Rational c = number();
            Monomial m;
            while (peek() == '(') {
                expect('(');
                std::string v = name();
                std::string e = word();
                for (char ch : e)
                    if (!std::isdigit(static_cast<unsigned char>(ch)))
                        error("bad exponent '" + e + "'");
                m = m * Monomial::var(v, static_cast<unsigned>(std::stoul(e)));
                expect(')');
            }
            expect(')');
            p += MPoly::term(c, m);
        }
        expect(')');
        return p;
    }

    Rational number() {
        std::string w = word();
        try {
            return parse_rational(w);
        } catch (const Error &) {
            error("bad number '" + w + "'");
        }
    }

    std::string name() {
        std::string w = word();
        if (w.empty() || !(std::isalpha(static_cast<unsigned char>(w[0])) || w[0] == '_'))
            error("bad variable name '" + w + "'");
        for (char ch : w)
            if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'))
                error("bad variable name '" + w + "'");
        return w;
    }

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
            adv();
    }
    char peek() {
        skip();
        return i_ < s_.size() ? s_[i_] : '\0';
    }
    void adv() {
        if (s_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++i_;
    }
    void expect(char c) {
        if (peek() != c)
            error(std::string("expected '") + c + "'");
        adv();
    }
    std::string word() {
        skip();
        std::string w;
        while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '(' &&
               s_[i_] != ')') {
            w += s_[i_];
            adv();
        }
        if (w.empty())
            error("expected token");
        return w;
    }
    [[noreturn]] void error(const std::string &m) {
        fail(ErrorCode::ParseError,
             "line " + std::to_string(line_) + " column " + std::to_string(col_) + ": " + m);
    }

    const std::string &s_;
    size_t i_ = 0;
    int line_ = 1, col_ = 1;
};

} // namespace

Formula Formula::parse(const std::string &text) {
    Parser p(text);
    Formula f = p.formula();
    p.finish();
    return f;
}

namespace {

template <class Sign> bool eval_rec(const Formula &phi, Sign &&sgn_of) {
    switch (phi.kind()) {
    case FKind::True:
        return true;
    case FKind::False:
        return false;
    case FKind::Atom: {
        int s = sgn_of(phi.poly());
        return phi.rel() == Rel::Gt ? s > 0 : phi.rel() == Rel::Ge ? s >= 0 : s == 0;
    }
    case FKind::And:
        for (auto &c : phi.children())
            if (!eval_rec(c, sgn_of))
                return false;
        return true;
    case FKind::Or:
        for (auto &c : phi.children())
            if (eval_rec(c, sgn_of))
                return true;
        return false;
    case FKind::Not:
        return !eval_rec(phi.body(), sgn_of);
    default:
        fail(ErrorCode::InvalidInput, "exact evaluation needs a quantifier-free formula");
    }
}

} // namespace

bool eval_formula(const Formula &phi, const std::map<std::string, Rational> &pt) {
    return eval_rec(phi, [&](const MPoly &p) { return sign(p.eval(pt)); });
}

bool eval_formula(const Formula &phi, const std::map<std::string, NFElem> &pt, const FieldPtr &K) {
    return eval_rec(phi, [&](const MPoly &p) { return p.eval(pt, K).sign(); });
}

namespace {

void collect_names(const Formula &phi, std::set<std::string> &out) {
    auto fv = phi.free_vars();
    out.insert(fv.begin(), fv.end());
    for (auto &b : phi.bound())
        out.insert(b.name);
    for (auto &c : phi.children())
        collect_names(c, out);
}

Formula subst_rec(const Formula &phi, std::map<std::string, MPoly> subs, std::set<std::string> &used) {
    switch (phi.kind()) {
    case FKind::True:
    case FKind::False:
        return phi;
    case FKind::Atom:
        return Formula::atom(phi.poly().substitute(subs), phi.rel());
    case FKind::And:
    case FKind::Or: {
        std::vector<Formula> xs;
        for (auto &c : phi.children())
            xs.push_back(subst_rec(c, subs, used));
        return phi.kind() == FKind::And ? Formula::conj(std::move(xs)) : Formula::disj(std::move(xs));
    }
    case FKind::Not:
        return Formula::negate(subst_rec(phi.body(), subs, used));
    case FKind::Forall:
    case FKind::Exists: {
        std::vector<BoundVar> bv = phi.bound();
        for (auto &b : bv)
            subs.erase(b.name);
        std::set<std::string> incoming;
        for (auto &[v, p] : subs) {
            auto vs = p.vars();
            incoming.insert(vs.begin(), vs.end());
        }
        std::map<std::string, MPoly> rename;
        for (auto &b : bv) {
            if (!incoming.count(b.name))
                continue;
            std::string fresh;
            for (int k = 1;; ++k) {
                fresh = b.name + "_" + std::to_string(k);
                if (!used.count(fresh) && !incoming.count(fresh))
                    break;
            }
            used.insert(fresh);
            rename[b.name] = MPoly::var(fresh);
            b.name = fresh;
        }
        Formula body = phi.body();
        if (!rename.empty())
            body = subst_rec(body, rename, used);
        body = subst_rec(body, subs, used);
        return phi.kind() == FKind::Forall ? Formula::forall(bv, body) : Formula::exists(bv, body);
    }
    }
    return phi;
}

Dnf dnf_rec(const Formula &phi, bool neg) {
    switch (phi.kind()) {
    case FKind::True:
        return neg ? Dnf{} : Dnf{{}};
    case FKind::False:
        return neg ? Dnf{{}} : Dnf{};
    case FKind::Atom: {
        const MPoly &p = phi.poly();
        if (!neg)
            return {{{p, phi.rel()}}};
        if (phi.rel() == Rel::Gt)
            return {{{-p, Rel::Ge}}};
        if (phi.rel() == Rel::Ge)
            return {{{-p, Rel::Gt}}};
        return {{{p, Rel::Gt}}, {{-p, Rel::Gt}}};
    }
    case FKind::Not:
        return dnf_rec(phi.body(), !neg);
    case FKind::And:
    case FKind::Or: {
        bool is_and = (phi.kind() == FKind::And) != neg;
        if (!is_and) {
            Dnf out;
            for (auto &c : phi.children()) {
                Dnf d = dnf_rec(c, neg);
                out.insert(out.end(), d.begin(), d.end());
            }
            return out;
        }
        Dnf acc{{}};
        for (auto &c : phi.children()) {
            Dnf d = dnf_rec(c, neg);
            Dnf next;
            for (auto &a : acc)
                for (auto &b : d) {
                    auto m = a;
                    m.insert(m.end(), b.begin(), b.end());
                    next.push_back(std::move(m));
                }
            acc = std::move(next);
        }
        return acc;
    }
    default:
        fail(ErrorCode::InvalidInput, "DNF conversion needs a quantifier-free formula");
    }
}

} // namespace

Formula substitute(const Formula &phi, const std::map<std::string, MPoly> &subs) {
    std::set<std::string> used;
    collect_names(phi, used);
    for (auto &[v, p] : subs) {
        used.insert(v);
        auto vs = p.vars();
        used.insert(vs.begin(), vs.end());
    }
    return subst_rec(phi, subs, used);
}

Dnf to_dnf(const Formula &phi) { return dnf_rec(phi, false); }

Formula from_dnf(const Dnf &d) {
    std::vector<Formula> ds;
    for (auto &c : d) {
        std::vector<Formula> as;
        for (auto &a : c)
            as.push_back(Formula::atom(a.poly, a.rel));
        ds.push_back(Formula::conj(std::move(as)));
    }
    return Formula::disj(std::move(ds));
}

} // namespace ominv
