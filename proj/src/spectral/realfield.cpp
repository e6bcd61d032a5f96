#include "ominv/spectral/realfield.hpp"
#include "ominv/error.hpp"

namespace ominv {

CElem CElem::real(const NFElem &r) { return {r, NFElem(r.field(), Rational(0))}; }

CElem &CElem::operator+=(const CElem &o) {
    re += o.re;
    im += o.im;
    return *this;
}

CElem &CElem::operator-=(const CElem &o) {
    re -= o.re;
    im -= o.im;
    return *this;
}

CElem operator*(const CElem &a, const CElem &b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

CElem operator*(const CElem &a, const NFElem &b) { return {a.re * b, a.im * b}; }

SpectralField SpectralField::build(const JordanData &J, const SpectralData &S) {
    std::vector<RealAlgebraic> vals;
    std::vector<size_t> rho_idx, om_idx;
    auto index_of = [&](const RealAlgebraic &x) {
        for (size_t i = 0; i < vals.size(); ++i)
            if (alg_equal(vals[i], x))
                return i;
        vals.push_back(x);
        return vals.size() - 1;
    };
    for (size_t l = 0; l < S.rho.size(); ++l) {
        rho_idx.push_back(index_of(S.rho[l]));
        om_idx.push_back(index_of(S.omega[l]));
    }
    SpectralField F;
    if (vals.empty()) {
        F.field = NumberField::rationals();
        return F;
    }
    CommonField cf = common_field(vals);
    F.field = cf.field;
    for (size_t l = 0; l < S.rho.size(); ++l) {
        F.rho.push_back(cf.elements[rho_idx[l]]);
        F.omega.push_back(cf.elements[om_idx[l]]);
    }
    return F;
}

CElem SpectralField::at_block(const NFElem &z, size_t block) const {
    CElem theta = lambda(block);
    CElem acc = CElem::real(constant(0));
    const auto &c = z.poly().coeffs();
    for (size_t i = c.size(); i-- > 0;)
        acc = acc * theta + CElem::real(constant(c[i]));
    return acc;
}

bool reality_check(const JordanData &J, const SpectralField &F, const std::vector<GaussMatrix> &C) {
    require(C.size() == J.blocks.size(), ErrorCode::ShapeMismatch, "one C block per Jordan block");
    for (size_t l = 0; l < C.size(); ++l) {
        require(C[l].size() == J.blocks[l].size, ErrorCode::ShapeMismatch, "C block size");
        for (auto &row : C[l])
            require(row.size() == J.blocks[l].size, ErrorCode::ShapeMismatch, "C block size");
    }
    size_t d = J.dim;
    std::vector<std::vector<CElem>> P(d, std::vector<CElem>(d)), Pi(d, std::vector<CElem>(d));
    for (size_t col = 0; col < d; ++col) {
        size_t l = J.block_of_column(col);
        for (size_t i = 0; i < d; ++i) {
            P[i][col] = F.at_block(J.P_elem(i, col), l);
            Pi[col][i] = F.at_block(J.Pinv_elem(col, i), l);
        }
    }
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) {
            CElem acc = CElem::real(F.constant(0));
            for (size_t l = 0; l < C.size(); ++l) {
                size_t o = J.offset[l], n = J.blocks[l].size;
                for (size_t a = 0; a < n; ++a)
                    for (size_t b = 0; b < n; ++b) {
                        const GaussRat &g = C[l][a][b];
                        if (g.re == 0 && g.im == 0)
                            continue;
                        CElem cg(F.constant(g.re), F.constant(g.im));
                        acc += P[i][o + a] * cg * Pi[o + b][j];
                    }
            }
            if (!acc.im.is_zero())
                return false;
        }
    return true;
}

} // namespace ominv
