#include "ominv/spectral/jordan.hpp"
#include "ominv/error.hpp"
#include "ominv/exactnum/factor.hpp"

#include <algorithm>
#include <map>

namespace ominv {

namespace {

using Vec = std::vector<NFElem>;

NFMatrix rows_of(const std::vector<Vec> &vs) { return NFMatrix(vs.begin(), vs.end()); }

size_t rank_of(const std::vector<Vec> &vs) {
    if (vs.empty())
        return 0;
    return nf_rank(rows_of(vs));
}

NFMatrix identity_nf(const FieldPtr &K, size_t n) {
    NFMatrix m = nf_zero(K, n, n);
    for (size_t i = 0; i < n; ++i)
        m[i][i] = NFElem(K, Rational(1));
    return m;
}

NFElem factor_theta(const EigenFactor &f) {
    if (f.q.degree() == 1)
        return NFElem(f.K, Rational(-f.q.coeff(0) / f.q.coeff(1)));
    return NFElem::generator(f.K);
}

EigenFactor build_factor(const RationalMatrix &A, const QPoly &q, int mult) {
    size_t d = A.rows();
    EigenFactor f;
    f.q = q;
    f.multiplicity = mult;
    f.K = NumberField::make(q);
    NFElem theta = factor_theta(f);
    NFMatrix N = nf_matrix(f.K, A);
    for (size_t i = 0; i < d; ++i)
        N[i][i] -= theta;

    std::vector<NFMatrix> pw{identity_nf(f.K, d)};
    std::vector<std::vector<Vec>> ker{{}};
    std::vector<size_t> kdim{0};
    while (kdim.back() < static_cast<size_t>(mult)) {
        pw.push_back(nf_mul(pw.back(), N));
        ker.push_back(nf_kernel(pw.back()));
        kdim.push_back(ker.back().size());
        if (pw.size() > d + 1)
            fail(ErrorCode::Internal, "generalized eigenspace dimension mismatch");
    }
    size_t top = kdim.size() - 1;

    struct Chain {
        size_t len;
        Vec v;
    };
    std::vector<Chain> chains;
    auto apply_pow = [&](const Vec &v, size_t e) {
        Vec r = v;
        for (size_t i = 0; i < e; ++i)
            r = nf_mul(N, r);
        return r;
    };
    for (size_t j = top; j >= 1; --j) {
        std::vector<Vec> S = ker[j - 1];
        size_t longer = 0;
        for (auto &c : chains)
            if (c.len > j) {
                S.push_back(apply_pow(c.v, c.len - j));
                ++longer;
            }
        size_t need = (kdim[j] - kdim[j - 1]) - longer;
        size_t rk = rank_of(S);
        for (const auto &v : ker[j]) {
            if (need == 0)
                break;
            S.push_back(v);
            size_t nr = rank_of(S);
            if (nr > rk) {
                rk = nr;
                chains.push_back({j, v});
                --need;
            } else {
                S.pop_back();
            }
        }
        if (need != 0)
            fail(ErrorCode::Internal, "Jordan chain construction failed");
    }

    f.V = nf_zero(f.K, d, mult);
    size_t col = 0;
    for (auto &c : chains) {
        f.chains.push_back(c.len);
        for (size_t b = 0; b < c.len; ++b) {
            Vec p = apply_pow(c.v, c.len - 1 - b);
            for (size_t i = 0; i < d; ++i)
                f.V[i][col] = p[i];
            ++col;
        }
    }
    if (col != static_cast<size_t>(mult))
        fail(ErrorCode::Internal, "Jordan chains do not span the generalized eigenspace");

    auto left = nf_kernel(nf_transpose(pw[top]));
    NFMatrix L = rows_of(left);
    NFMatrix LV = nf_mul(L, f.V);
    f.W = nf_mul(nf_inverse(LV), L);
    f.roots = std::make_shared<ComplexRoots>(q, 128);
    return f;
}

unsigned bits_for(const Rational &w) {
    unsigned bits = 64;
    Rational t = w;
    while (t < 1) {
        t *= 2;
        ++bits;
    }
    return bits;
}

} // namespace

ComplexAlgebraic complex_value(const NFElem &z, const EigenFactor &f, size_t root) {
    if (z.is_rational())
        return {RealAlgebraic(z.rational_value()), RealAlgebraic(0)};
    auto enclosure = [&](const Rational &w) {
        unsigned bits = bits_for(w);
        f.roots->refine(bits + 16);
        PrecisionGuard g(f.roots->bits() + 32);
        return z.enclose_at(f.roots->box(root));
    };
    QPoly m = z.minpoly();
    if (f.roots->is_real(root)) {
        RealAlgebraic re = pick_root({m}, [&](const Rational &w) {
            ComplexInterval c = enclosure(w);
            return std::make_pair(c.re.lo_rat(), c.re.hi_rat());
        });
        return {re, RealAlgebraic(0)};
    }
    QPoly S = sum_poly(m, m).scale(Rational(2));
    RealAlgebraic re = pick_root(irreducible_factors(S), [&](const Rational &w) {
        ComplexInterval c = enclosure(w);
        return std::make_pair(c.re.lo_rat(), c.re.hi_rat());
    });
    QPoly D = sum_poly(m, m.negate_var());
    std::vector<Rational> ev(D.coeffs().size()), od(D.coeffs().size());
    for (size_t k = 0; k < D.coeffs().size(); ++k) {
        Rational c = D.coeffs()[k] * pow2(static_cast<long>(k));
        if (k % 2 == 0)
            ev[k] = (k / 2) % 2 == 0 ? c : Rational(-c);
        else
            od[k] = ((k - 1) / 2) % 2 == 0 ? c : Rational(-c);
    }
    QPoly G = gcd(QPoly(ev), QPoly(od));
    RealAlgebraic im = pick_root(irreducible_factors(G), [&](const Rational &w) {
        ComplexInterval c = enclosure(w);
        return std::make_pair(c.im.lo_rat(), c.im.hi_rat());
    });
    return {re, im};
}

size_t JordanData::block_of_column(size_t col) const {
    auto it = std::upper_bound(offset.begin(), offset.end(), col);
    return static_cast<size_t>(it - offset.begin()) - 1;
}

const NFElem &JordanData::P_elem(size_t i, size_t col) const {
    size_t l = block_of_column(col);
    const auto &b = blocks[l];
    return factors[b.factor].V[i][b.vcol + (col - offset[l])];
}

const NFElem &JordanData::Pinv_elem(size_t row, size_t j) const {
    size_t l = block_of_column(row);
    const auto &b = blocks[l];
    return factors[b.factor].W[b.vcol + (row - offset[l])][j];
}

ComplexInterval JordanData::P_enclosure(size_t i, size_t col) const {
    const auto &b = blocks[block_of_column(col)];
    const auto &f = factors[b.factor];
    PrecisionGuard g(std::max<mpfr_prec_t>(working_precision(), f.roots->bits() + 32));
    return P_elem(i, col).enclose_at(f.roots->box(b.root));
}

ComplexInterval JordanData::Pinv_enclosure(size_t row, size_t j) const {
    const auto &b = blocks[block_of_column(row)];
    const auto &f = factors[b.factor];
    PrecisionGuard g(std::max<mpfr_prec_t>(working_precision(), f.roots->bits() + 32));
    return Pinv_elem(row, j).enclose_at(f.roots->box(b.root));
}

ComplexInterval JordanData::lambda_enclosure(size_t block) const {
    const auto &b = blocks[block];
    return factors[b.factor].roots->box(b.root);
}

void JordanData::refine(mpfr_prec_t bits) const {
    for (const auto &f : factors)
        f.roots->refine(bits);
}

ComplexAlgebraic JordanData::P_entry(size_t i, size_t col) const {
    const auto &b = blocks[block_of_column(col)];
    return complex_value(P_elem(i, col), factors[b.factor], b.root);
}

ComplexAlgebraic JordanData::Pinv_entry(size_t row, size_t j) const {
    const auto &b = blocks[block_of_column(row)];
    return complex_value(Pinv_elem(row, j), factors[b.factor], b.root);
}

JordanDecomposition jordan_decompose(const RationalMatrix &A) {
    require(A.square(), ErrorCode::NotSquare, "Jordan decomposition of a non-square matrix");
    size_t d = A.rows();
    JordanDecomposition out;
    JordanData &J = out.jordan;
    J.dim = d;
    QPoly cp = char_poly(A);
    for (auto &[q, m] : factor_q(cp)) {
        if (q.degree() > static_cast<int>(degree_cap()))
            fail(ErrorCode::DegreeCapExceeded, "eigenvalue field degree exceeds the cap");
        J.factors.push_back(build_factor(A, q, m));
    }

    struct Cand {
        JordanBlock b;
        bool upper;
        size_t conj_root;
    };
    std::vector<Cand> prim;
    for (size_t fi = 0; fi < J.factors.size(); ++fi) {
        const auto &f = J.factors[fi];
        const ComplexRoots &R = *f.roots;
        std::vector<ComplexAlgebraic> lam(R.size());
        for (size_t r = 0; r < R.size(); ++r) {
            if (R.is_real(r))
                lam[r] = {R.real_root(r), RealAlgebraic(0)};
            else if (R.conjugate_index(r) > r)
                lam[r] = complex_value(factor_theta(f), f, r);
        }
        for (size_t r = 0; r < R.size(); ++r) {
            bool upper = !R.is_real(r) && R.conjugate_index(r) > r;
            if (!R.is_real(r) && !upper)
                continue;
            size_t vcol = 0;
            for (size_t c = 0; c < f.chains.size(); ++c) {
                JordanBlock b;
                b.factor = fi;
                b.root = r;
                b.chain = c;
                b.size = f.chains[c];
                b.vcol = vcol;
                b.lambda = lam[r];
                prim.push_back({b, upper, R.conjugate_index(r)});
                vcol += f.chains[c];
            }
        }
    }
    std::stable_sort(prim.begin(), prim.end(), [](const Cand &x, const Cand &y) {
        Ordering o = alg_compare(x.b.lambda.re, y.b.lambda.re);
        if (o != Ordering::EQ)
            return o == Ordering::LT;
        o = alg_compare(x.b.lambda.im, y.b.lambda.im);
        if (o != Ordering::EQ)
            return o == Ordering::LT;
        return x.b.size < y.b.size;
    });
    size_t col = 0;
    for (auto &c : prim) {
        J.blocks.push_back(c.b);
        J.offset.push_back(col);
        col += c.b.size;
        if (c.upper) {
            JordanBlock cb = c.b;
            cb.root = c.conj_root;
            cb.lambda = c.b.lambda.conjugate();
            J.blocks.push_back(cb);
            J.offset.push_back(col);
            col += cb.size;
        }
    }
    if (col != d)
        fail(ErrorCode::Internal, "Jordan blocks do not cover the space");

    SpectralData &S = out.spectral;
    S.Qt.assign(d, std::vector<QPoly>(d));
    for (size_t l = 0; l < J.blocks.size(); ++l) {
        S.rho.push_back(J.blocks[l].lambda.re);
        S.omega.push_back(J.blocks[l].lambda.im);
        size_t o = J.offset[l], n = J.blocks[l].size;
        for (size_t a = 0; a < n; ++a)
            for (size_t b = a; b < n; ++b)
                S.Qt[o + a][o + b] = QPoly::monomial(Rational(1) / Rational(factorial(b - a)), b - a);
    }

    JordanCheck chk = verify_jordan(A, J);
    if (!chk.AP_eq_PJ || !chk.P_Pinv_identity)
        fail(ErrorCode::Internal, "Jordan decomposition failed exact verification");
    return out;
}

JordanCheck verify_jordan(const RationalMatrix &A, const JordanData &J) {
    JordanCheck c;
    size_t d = J.dim;
    c.AP_eq_PJ = true;
    RationalMatrix PP(d, d);
    for (const auto &f : J.factors) {
        NFElem theta = factor_theta(f);
        NFMatrix AV = nf_mul(nf_matrix(f.K, A), f.V);
        size_t col = 0;
        for (size_t len : f.chains) {
            for (size_t b = 0; b < len; ++b, ++col)
                for (size_t i = 0; i < d; ++i) {
                    NFElem rhs = f.V[i][col] * theta;
                    if (b > 0)
                        rhs += f.V[i][col - 1];
                    if (AV[i][col] != rhs)
                        c.AP_eq_PJ = false;
                }
        }
        NFMatrix VW = nf_mul(f.V, f.W);
        for (size_t i = 0; i < d; ++i)
            for (size_t j = 0; j < d; ++j)
                PP.at(i, j) += VW[i][j].trace();
    }
    c.P_Pinv_identity = PP == RationalMatrix::identity(d);
    return c;
}

bool verify_q_semigroup(const SpectralData &S) {
    using Bi = std::map<std::pair<int, int>, Rational>;
    auto add = [](Bi &m, int a, int b, const Rational &c) {
        if (c == 0)
            return;
        auto &x = m[{a, b}];
        x += c;
        if (x == 0)
            m.erase({a, b});
    };
    size_t d = S.Qt.size();
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) {
            Bi lhs, rhs;
            for (size_t m = 0; m < d; ++m) {
                const QPoly &x = S.Qt[i][m], &y = S.Qt[m][j];
                for (int p = 0; p <= x.degree(); ++p)
                    for (int q = 0; q <= y.degree(); ++q)
                        add(lhs, p, q, x.coeff(p) * y.coeff(q));
            }
            const QPoly &z = S.Qt[i][j];
            for (int n = 0; n <= z.degree(); ++n)
                for (int p = 0; p <= n; ++p)
                    add(rhs, p, n - p, z.coeff(n) * Rational(binomial(n, p)));
            if (lhs != rhs)
                return false;
        }
    return true;
}

} // namespace ominv
