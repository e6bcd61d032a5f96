#include "internal.hpp"
#include "ominv/error.hpp"
#include "ominv/synthesis/fatcone.hpp"

#include <functional>
#include <unordered_map>

namespace ominv {

using nlohmann::json;

namespace detail {

MPoly nf_to_mpoly(const NFElem &e) { return MPoly::from_qpoly(e.poly(), "g"); }

Formula close_over_field(const FieldPtr &K, const Formula &body) {
    if (K->degree() <= 1 || !body.free_vars().count("g"))
        return body;
    auto [lo, hi] = K->generator().isolator();
    Formula guard = Formula::eq(MPoly::from_qpoly(K->minpoly(), "g"));
    return Formula::exists({BoundVar{"g", lo, hi}}, Formula::conj({guard, body}));
}

MPoly linear_form(const RatVec &row, const std::vector<std::string> &vars) {
    MPoly p;
    for (size_t k = 0; k < row.size(); ++k)
        if (row[k] != 0)
            p += MPoly::var(vars[k]) * row[k];
    return p;
}

MPoly norm_form(const std::vector<NFElem> &beta, const std::vector<std::string> &vars) {
    const FieldPtr &K = beta.front().field();
    size_t m = K->degree();
    // entry (r, c): coordinate r of beta * theta^c, linear in x
    std::vector<std::vector<MPoly>> E(m, std::vector<MPoly>(m));
    NFElem theta = NFElem::generator(K);
    for (size_t k = 0; k < beta.size(); ++k) {
        if (beta[k].is_zero())
            continue;
        NFElem b = beta[k];
        for (size_t c = 0; c < m; ++c) {
            auto co = b.coords();
            for (size_t r = 0; r < m && r < co.size(); ++r)
                if (co[r] != 0)
                    E[r][c] += MPoly::var(vars[k]) * co[r];
            b *= theta;
        }
    }
    std::unordered_map<uint64_t, MPoly> memo;
    std::function<MPoly(size_t, uint64_t)> det = [&](size_t r, uint64_t used) -> MPoly {
        if (r == m)
            return MPoly(1);
        auto it = memo.find(used);
        if (it != memo.end())
            return it->second;
        MPoly s;
        int pos = 0;
        for (size_t c = 0; c < m; ++c) {
            if (used >> c & 1)
                continue;
            if (!E[r][c].is_zero()) {
                MPoly t = E[r][c] * det(r + 1, used | (uint64_t(1) << c));
                if (pos % 2)
                    s -= t;
                else
                    s += t;
            }
            ++pos;
        }
        memo.emplace(used, s);
        return s;
    };
    return det(0, 0);
}

RatVec solve_square(RationalMatrix M, RatVec b) {
    size_t n = M.rows();
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && M.at(p, c) == 0)
            ++p;
        require(p < n, ErrorCode::Internal, "singular system");
        if (p != c) {
            for (size_t j = 0; j < n; ++j)
                std::swap(M.at(p, j), M.at(c, j));
            std::swap(b[p], b[c]);
        }
        Rational inv = 1 / M.at(c, c);
        for (size_t j = 0; j < n; ++j)
            M.at(c, j) *= inv;
        b[c] *= inv;
        for (size_t r = 0; r < n; ++r) {
            if (r == c || M.at(r, c) == 0)
                continue;
            Rational f = M.at(r, c);
            for (size_t j = 0; j < n; ++j)
                M.at(r, j) -= f * M.at(c, j);
            b[r] -= f * b[c];
        }
    }
    return b;
}

} // namespace detail

using namespace detail;

RationalMatrix companion_matrix(const QPoly &c) {
    require(c.degree() >= 1 && c.lc() == 1, ErrorCode::InvalidInput, "companion needs a monic nonconstant polynomial");
    size_t d = c.degree();
    RationalMatrix A(d, d);
    for (size_t i = 0; i + 1 < d; ++i)
        A.at(i, i + 1) = 1;
    for (size_t j = 0; j < d; ++j)
        A.at(d - 1, j) = -c.coeff(j);
    return A;
}

static RationalMatrix matrix_poly(const QPoly &p, const RationalMatrix &A) {
    size_t d = A.rows();
    RationalMatrix M(d, d);
    for (int k = p.degree(); k >= 0; --k)
        M = M * A + RationalMatrix::identity(d) * p.coeff(k);
    return M;
}

ReductionInstance build_reduction(const ExponentialPolynomial &f, unsigned degree_cap) {
    ReductionInstance R;
    R.g = f.normalize(&R.shift);
    require(R.g.terms() > 0, ErrorCode::InvalidInput, "exponential polynomial is identically zero");
    size_t n = R.g.terms();

    QPoly q = QPoly::constant(Rational(1));
    for (auto &r : R.g.rho) {
        QPoly mp = r.minpoly().monic();
        if (std::find(R.factors.begin(), R.factors.end(), mp) == R.factors.end()) {
            R.factors.push_back(mp);
            q *= mp;
        }
    }
    R.companion_poly = q * QPoly::monomial(Rational(1), 2);
    size_t d = R.companion_poly.degree();
    require(d <= degree_cap, ErrorCode::DegreeCapExceeded,
            "companion degree " + std::to_string(d) + " exceeds cap " + std::to_string(degree_cap));
    R.A = companion_matrix(R.companion_poly);
    for (size_t k = 0; k < d; ++k)
        R.vars.push_back("x" + std::to_string(k + 1));

    std::vector<RealAlgebraic> all = R.g.a;
    all.insert(all.end(), R.g.rho.begin(), R.g.rho.end());
    CommonField cf = common_field(all);
    R.K = cf.field;
    R.a.assign(cf.elements.begin(), cf.elements.begin() + n);
    R.rho.assign(cf.elements.begin() + n, cf.elements.end());

    // left eigenvectors normalized so that y_i(x0) = 1
    const QPoly &c = R.companion_poly;
    for (auto &r : R.rho) {
        std::vector<NFElem> w(d, NFElem(R.K, Rational(0)));
        w[d - 1] = NFElem(R.K, Rational(1));
        for (size_t k = d - 1; k >= 1; --k)
            w[k - 1] = r * w[k] + NFElem(R.K, c.coeff(k));
        R.coord_rows.push_back(std::move(w));
    }

    // spectral projector onto the nilpotent block: q(A) s(A), q s = 1 mod x^2
    Rational q0 = q.coeff(0), q1 = q.coeff(1);
    QPoly s({Rational(1) / q0, -q1 / (q0 * q0)});
    RationalMatrix Pi0 = matrix_poly(q * s, R.A);
    for (size_t k = 0; k < d; ++k) {
        R.time_row.push_back(Pi0.at(0, k));
        R.unit_row.push_back(Pi0.at(1, k));
    }
    R.x0.assign(d, Rational(0));
    R.x0[1] += 1;
    R.x0[d - 1] += 1;
    for (size_t k = 0; k < d; ++k)
        R.x0[k] -= Pi0.at(k, d - 1);

    R.beta.assign(d, NFElem(R.K, Rational(0)));
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < d; ++k)
            R.beta[k] += R.a[i] * R.coord_rows[i][k];
    R.rational_target = std::all_of(R.beta.begin(), R.beta.end(), [](const NFElem &b) { return b.is_rational(); });

    MPoly T = linear_form(R.time_row, R.vars);
    Formula window = Formula::conj({Formula::ge(T), Formula::le(T, MPoly(R.g.t0))});
    if (R.rational_target) {
        RatVec b;
        for (auto &x : R.beta)
            b.push_back(x.rational_value());
        R.Y = Formula::conj({Formula::eq(linear_form(b, R.vars)), window});
        R.Y_exact = R.Y;
        R.equivalence_note = "rational coefficients; target exact";
    } else {
        R.Y = Formula::conj({Formula::eq(norm_form(R.beta, R.vars)), window});
        MPoly L;
        for (size_t k = 0; k < d; ++k)
            L += nf_to_mpoly(R.beta[k]) * MPoly::var(R.vars[k]);
        R.Y_exact = close_over_field(R.K, Formula::conj({Formula::eq(L), window}));
        R.equivalence_note = "norm form over a degree " + std::to_string(R.K->degree()) +
                             " field; equals the exact target on the reachable region";
    }

    // target in Jordan coordinates
    std::vector<std::string> jv;
    for (size_t i = 0; i <= n; ++i)
        jv.push_back("x" + std::to_string(i + 1));
    CommonField ca = common_field(R.g.a);
    MPoly La;
    bool arat = ca.field->degree() == 1;
    if (arat) {
        for (size_t i = 0; i < n; ++i)
            La += MPoly::var(jv[i]) * ca.elements[i].rational_value();
    } else {
        std::vector<NFElem> ba = ca.elements;
        ba.push_back(NFElem(ca.field, Rational(0)));
        La = norm_form(ba, jv);
    }
    R.phi = Formula::conj(
        {Formula::eq(La), Formula::ge(MPoly::var(jv[n])), Formula::le(MPoly::var(jv[n]), MPoly(R.g.t0))});
    return R;
}

json ReductionInstance::problem_json() const {
    json red = {{"input", g.to_json()},
                {"shift", to_string(shift)},
                {"companion_poly", companion_poly.to_list_string()},
                {"phi", phi.to_sexpr()},
                {"target_exact", Y_exact.to_sexpr()},
                {"rational_target", rational_target},
                {"time_row", ratvec_to_json(time_row)},
                {"unit_row", ratvec_to_json(unit_row)},
                {"equivalence", equivalence_note}};
    return {{"system", {{"matrix", matrix_to_json(A)}, {"x0", ratvec_to_json(x0)}}},
            {"target", Y.to_sexpr()},
            {"state_vars", vars},
            {"reduction", red}};
}

} // namespace ominv
