#include "ominv/exactnum/numfield.hpp"
#include "ominv/error.hpp"
#include "ominv/exactnum/factor.hpp"

#include <sstream>

namespace ominv {

namespace {

std::vector<Rational> compute_traces(const QPoly &m) {
    size_t n = static_cast<size_t>(m.degree());
    return power_sums(m.monic(), n == 0 ? 0 : 2 * n - 2);
}

} // namespace

FieldPtr NumberField::rationals() {
    static FieldPtr q = [] {
        auto K = std::shared_ptr<NumberField>(new NumberField());
        K->minpoly_ = QPoly::x();
        K->generator_ = RealAlgebraic(Rational(0));
        K->traces_ = {Rational(1)};
        return K;
    }();
    return q;
}

FieldPtr NumberField::make(const QPoly &minpoly) {
    if (minpoly.degree() == 1)
        return rationals();
    auto K = std::shared_ptr<NumberField>(new NumberField());
    K->minpoly_ = minpoly.monic();
    K->traces_ = compute_traces(K->minpoly_);
    return K;
}

FieldPtr NumberField::make_real(const RealAlgebraic &generator) {
    if (generator.is_rational())
        return rationals();
    auto K = std::shared_ptr<NumberField>(new NumberField());
    K->minpoly_ = generator.minpoly();
    K->generator_ = generator;
    K->traces_ = compute_traces(K->minpoly_);
    return K;
}

const RealAlgebraic &NumberField::generator() const {
    if (!generator_)
        fail(ErrorCode::Internal, "number field has no real embedding");
    return *generator_;
}

std::string NumberField::describe() const {
    std::ostringstream os;
    os << "Q(t), t root of " << minpoly_.to_string("t");
    if (generator_ && degree() > 1)
        os << " with t in " << generator_->enclosure_string(20);
    return os.str();
}

NFElem::NFElem(FieldPtr K, const Rational &c) : K_(std::move(K)), p_(QPoly::constant(c)) {}

NFElem::NFElem(FieldPtr K, QPoly p) : K_(std::move(K)) {
    if (p.degree() >= K_->degree())
        p = p % K_->minpoly();
    p_ = std::move(p);
}

NFElem NFElem::from_coords(FieldPtr K, const std::vector<Rational> &coords) {
    return NFElem(std::move(K), QPoly(coords));
}

NFElem NFElem::generator(FieldPtr K) {
    if (K->degree() == 1)
        return NFElem(K, Rational(-K->minpoly().coeff(0)));
    return NFElem(K, QPoly::x());
}

std::vector<Rational> NFElem::coords() const {
    std::vector<Rational> c(K_->degree());
    for (size_t i = 0; i < c.size(); ++i)
        c[i] = p_.coeff(i);
    return c;
}

NFElem NFElem::operator-() const {
    NFElem r = *this;
    r.p_ = -r.p_;
    return r;
}

NFElem &NFElem::operator+=(const NFElem &o) {
    if (!K_)
        K_ = o.K_;
    p_ += o.p_;
    return *this;
}

NFElem &NFElem::operator-=(const NFElem &o) {
    if (!K_)
        K_ = o.K_;
    p_ -= o.p_;
    return *this;
}

NFElem &NFElem::operator*=(const NFElem &o) {
    if (!K_)
        K_ = o.K_;
    p_ *= o.p_;
    if (p_.degree() >= K_->degree())
        p_ = p_ % K_->minpoly();
    return *this;
}

NFElem &NFElem::operator*=(const Rational &r) {
    p_ *= r;
    return *this;
}

NFElem NFElem::inverse() const {
    if (is_zero())
        fail(ErrorCode::DivisionByZero, "inverse of zero field element");
    if (p_.degree() == 0)
        return NFElem(K_, Rational(1 / p_.coeff(0)));
    auto [g, s, t] = ext_gcd(p_, K_->minpoly());
    if (g.degree() != 0)
        fail(ErrorCode::Internal, "field modulus is not irreducible");
    return NFElem(K_, s);
}

NFElem NFElem::pow(unsigned e) const {
    NFElem r(K_, Rational(1)), b = *this;
    while (e) {
        if (e & 1)
            r *= b;
        e >>= 1;
        if (e)
            b *= b;
    }
    return r;
}

Rational NFElem::trace() const {
    Rational t = 0;
    const auto &tr = K_->traces();
    for (size_t i = 0; i < p_.coeffs().size(); ++i)
        t += p_.coeffs()[i] * tr[i];
    return t;
}

QPoly NFElem::charpoly() const {
    size_t n = static_cast<size_t>(K_->degree());
    std::vector<Rational> ps(n + 1);
    ps[0] = static_cast<long>(n);
    NFElem acc(K_, Rational(1));
    for (size_t k = 1; k <= n; ++k) {
        acc *= *this;
        ps[k] = acc.trace();
    }
    return from_power_sums(ps, n);
}

QPoly NFElem::minpoly() const {
    if (is_rational())
        return QPoly(std::vector<Rational>{-rational_value(), Rational(1)});
    return squarefree_part(charpoly());
}

static Interval horner(const QPoly &p, const Interval &x) {
    Interval acc(0);
    for (size_t i = p.coeffs().size(); i-- > 0;)
        acc = acc * x + Interval(p.coeffs()[i]);
    return acc;
}

Interval NFElem::enclose() const {
    if (is_rational())
        return Interval(rational_value());
    return horner(p_, ominv::enclose(K_->generator()));
}

int NFElem::sign() const {
    if (is_zero())
        return 0;
    if (is_rational())
        return sgn(rational_value());
    for (mpfr_prec_t prec = 64; prec <= (1 << 20); prec *= 2) {
        PrecisionGuard g(prec);
        Interval v = enclose();
        if (v.positive())
            return 1;
        if (v.negative())
            return -1;
    }
    fail(ErrorCode::PrecisionUnreachable, "sign of a nonzero field element not resolved");
}

RealAlgebraic NFElem::to_real() const {
    if (is_rational())
        return RealAlgebraic(rational_value());
    QPoly mp = minpoly();
    return pick_root({mp}, [&](const Rational &w) {
        long bits = 64;
        Rational t = w;
        while (t < 1) {
            t *= 2;
            ++bits;
        }
        PrecisionGuard g(bits + 32);
        Interval v = enclose();
        return std::make_pair(v.lo_rat(), v.hi_rat());
    });
}

ComplexInterval NFElem::enclose_at(const ComplexInterval &theta) const {
    ComplexInterval acc(Interval(0), Interval(0));
    for (size_t i = p_.coeffs().size(); i-- > 0;)
        acc = acc * theta + ComplexInterval(Interval(p_.coeffs()[i]), Interval(0));
    return acc;
}

std::string NFElem::to_string(const std::string &var) const { return p_.to_string(var); }

int nf_compare(const NFElem &a, const NFElem &b) { return (a - b).sign(); }

NFPoly nfpoly_trim(NFPoly a) {
    while (!a.empty() && a.back().is_zero())
        a.pop_back();
    return a;
}

static NFPoly nfpoly_rem(NFPoly a, const NFPoly &b) {
    a = nfpoly_trim(std::move(a));
    NFElem inv = b.back().inverse();
    while (a.size() >= b.size()) {
        NFElem f = a.back() * inv;
        size_t off = a.size() - b.size();
        for (size_t j = 0; j < b.size(); ++j)
            a[off + j] -= f * b[j];
        a.pop_back();
        a = nfpoly_trim(std::move(a));
    }
    return a;
}

NFPoly nfpoly_gcd(NFPoly a, NFPoly b) {
    a = nfpoly_trim(std::move(a));
    b = nfpoly_trim(std::move(b));
    while (!b.empty()) {
        NFPoly r = nfpoly_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (a.empty())
        return a;
    NFElem inv = a.back().inverse();
    for (auto &c : a)
        c *= inv;
    return a;
}

// Evaluate a rational polynomial at a field element.
static NFElem eval_in(const QPoly &p, const NFElem &x) {
    NFElem acc(x.field(), Rational(0));
    for (size_t i = p.coeffs().size(); i-- > 0;) {
        acc *= x;
        acc += NFElem(x.field(), p.coeffs()[i]);
    }
    return acc;
}

namespace {

struct PrimitiveStep {
    FieldPtr G;
    NFElem theta_img, x_img;
};

// Q(theta, x) = Q(theta + k x) for the first k where the gcd is linear.
PrimitiveStep primitive_step(const FieldPtr &F, const RealAlgebraic &x) {
    const RealAlgebraic &theta = F->generator();
    for (long k = 1; k < 200; ++k) {
        RealAlgebraic kx = alg_arith(x, ArithOp::Mul, RealAlgebraic(Rational(k)));
        unsigned n = static_cast<unsigned>(F->degree()) * static_cast<unsigned>(x.degree());
        if (n > degree_cap())
            fail(ErrorCode::DegreeCapExceeded, "compositum degree " + std::to_string(n) + " exceeds cap");
        RealAlgebraic eta = alg_arith(theta, ArithOp::Add, kx);
        if (eta.is_rational())
            continue;
        FieldPtr G = NumberField::make_real(eta);
        NFElem e = NFElem::generator(G);
        // p_x(z) and m_theta(eta - k z) over G
        const QPoly &px = x.minpoly();
        NFPoly a;
        for (auto &c : px.coeffs())
            a.push_back(NFElem(G, c));
        // m_theta(eta - k z) expanded in z
        NFPoly lin{e, NFElem(G, Rational(-k))};
        NFPoly b{NFElem(G, Rational(0))};
        const QPoly &mt = F->minpoly();
        for (size_t i = mt.coeffs().size(); i-- > 0;) {
            NFPoly nb(b.size() + 1, NFElem(G, Rational(0)));
            for (size_t u = 0; u < b.size(); ++u)
                for (size_t v = 0; v < 2; ++v)
                    nb[u + v] += b[u] * lin[v];
            nb[0] += NFElem(G, mt.coeffs()[i]);
            b = nfpoly_trim(std::move(nb));
        }
        NFPoly g = nfpoly_gcd(a, b);
        if (g.size() != 2)
            continue;
        NFElem ximg = -g[0];
        NFElem thimg = e - ximg * Rational(k);
        return {G, thimg, ximg};
    }
    fail(ErrorCode::Internal, "primitive element search failed");
}

// Coordinates of y (in G) with respect to powers of t (in G), when Q(t) = G.
std::vector<Rational> express_in_powers(const NFElem &t, const NFElem &y) {
    int n = t.field()->degree();
    std::vector<std::vector<Rational>> cols;
    NFElem pw(t.field(), Rational(1));
    for (int j = 0; j < n; ++j) {
        cols.push_back(pw.coords());
        pw *= t;
    }
    // solve sum_j c_j cols[j] = y by Gauss-Jordan
    std::vector<std::vector<Rational>> M(n, std::vector<Rational>(n + 1));
    auto yc = y.coords();
    for (int r = 0; r < n; ++r) {
        for (int j = 0; j < n; ++j)
            M[r][j] = cols[j][r];
        M[r][n] = yc[r];
    }
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (M[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0)
            fail(ErrorCode::Internal, "express_in_powers: singular basis");
        std::swap(M[piv], M[c]);
        Rational inv = 1 / M[c][c];
        for (auto &v : M[c])
            v *= inv;
        for (int r = 0; r < n; ++r) {
            if (r == c || M[r][c] == 0)
                continue;
            Rational f = M[r][c];
            for (int j = c; j <= n; ++j)
                M[r][j] -= f * M[c][j];
        }
    }
    std::vector<Rational> out(n);
    for (int r = 0; r < n; ++r)
        out[r] = M[r][n];
    return out;
}

} // namespace

std::optional<NFElem> embed_in_field(const FieldPtr &K, const RealAlgebraic &x) {
    if (x.is_rational())
        return NFElem(K, x.rational_value());
    if (K->degree() == 1 || x.degree() > K->degree() || K->degree() % x.degree() != 0)
        return std::nullopt;
    PrimitiveStep st = primitive_step(K, x);
    if (st.G->degree() != K->degree())
        return std::nullopt;
    return NFElem::from_coords(K, express_in_powers(st.theta_img, st.x_img));
}

CommonField common_field(const std::vector<RealAlgebraic> &xs) {
    FieldPtr F = NumberField::rationals();
    std::vector<NFElem> elems;
    for (const auto &x : xs) {
        if (x.is_rational()) {
            elems.push_back(NFElem(F, x.rational_value()));
            continue;
        }
        if (F->degree() == 1) {
            if (static_cast<unsigned>(x.degree()) > degree_cap())
                fail(ErrorCode::DegreeCapExceeded, "field degree exceeds cap");
            FieldPtr G = NumberField::make_real(x);
            for (auto &e : elems)
                e = NFElem(G, e.rational_value());
            F = G;
            elems.push_back(NFElem::generator(G));
            continue;
        }
        if (auto e = embed_in_field(F, x)) {
            elems.push_back(*e);
            continue;
        }
        PrimitiveStep st = primitive_step(F, x);
        if (static_cast<unsigned>(st.G->degree()) > degree_cap())
            fail(ErrorCode::DegreeCapExceeded, "field degree exceeds cap");
        for (auto &e : elems)
            e = eval_in(e.poly(), st.theta_img);
        F = st.G;
        elems.push_back(st.x_img);
    }
    CommonField out;
    out.field = F;
    for (auto &e : elems) {
        NFElem fixed(F, e.poly());
        out.coordinates.push_back(fixed.coords());
        out.elements.push_back(fixed);
    }
    return out;
}

} // namespace ominv
