#include "ominv/checker/checker.hpp"
#include "ominv/error.hpp"
#include "ominv/semialg/boxqe.hpp"

#include <random>

namespace ominv {

IntervalVector orbit_enclosure(const RationalMatrix &A, const RatVec &x0, const Rational &t, unsigned bits) {
    require(t >= 0, ErrorCode::InvalidInput, "t must be nonnegative");
    ConeSpec C = ConeSpec::build(A, x0);
    for (mpfr_prec_t prec = bits + 32; prec <= (1 << 15); prec *= 2) {
        PrecisionGuard g(prec);
        Interval ti(t);
        std::vector<ComplexInterval> tau;
        for (size_t a = 0; a < C.k(); ++a) {
            Interval ph = C.omega(a).enclose() * ti;
            tau.push_back({cos(ph), sin(ph)});
        }
        IntervalVector x = C.k() ? cone_point_enclosure(C, ti, tau) : IntervalVector(C.dim(), Interval(0));
        // centred output of half-width 2^-bits S, S the largest power of two <= max(1, |x|)
        IntervalVector out;
        for (auto &v : x) {
            Rational S(1);
            while (v.mig() >= 2 * S)
                S *= 2;
            Rational h = pow2(-static_cast<long>(bits)) * S;
            if (v.hi_rat() - v.lo_rat() > h)
                break;
            Rational mid = (v.lo_rat() + v.hi_rat()) / 2;
            PrecisionGuard wide(2 * prec + 64);
            out.emplace_back(Rational(mid - h), Rational(mid + h));
        }
        if (out.size() == x.size())
            return out;
    }
    fail(ErrorCode::PrecisionUnreachable, "orbit enclosure width not reached");
}

std::vector<IntervalVector> taylor_exp_matrix(const RationalMatrix &A, const Rational &delta, unsigned terms) {
    size_t n = A.rows();
    std::vector<IntervalVector> S(n, IntervalVector(n, Interval(0))), T = S;
    for (size_t i = 0; i < n; ++i)
        S[i][i] = T[i][i] = Interval(1);
    Rational norm(0);
    for (size_t i = 0; i < n; ++i) {
        Rational row(0);
        for (size_t j = 0; j < n; ++j)
            row += rat_abs(A.at(i, j));
        norm = std::max(norm, row);
    }
    Interval d(delta);
    for (unsigned k = 1; k < terms; ++k) {
        std::vector<IntervalVector> N(n, IntervalVector(n, Interval(0)));
        for (size_t i = 0; i < n; ++i)
            for (size_t l = 0; l < n; ++l)
                for (size_t j = 0; j < n; ++j)
                    if (A.at(l, j) != 0)
                        N[i][j] += T[i][l] * Interval(A.at(l, j));
        Interval scale = d / Interval(static_cast<long>(k));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                T[i][j] = N[i][j] * scale;
                S[i][j] += T[i][j];
            }
    }
    Interval x(Rational(norm * delta));
    Interval tail = pow_int(x, terms) / Interval(Rational(factorial(terms))) * exp(x);
    Rational h = tail.hi_rat();
    for (auto &row : S)
        for (auto &e : row)
            e += Interval(-h, h);
    return S;
}

IntervalVector taylor_flow(const RationalMatrix &A, const IntervalVector &v, const Rational &delta, unsigned terms) {
    Rational norm(0);
    for (size_t i = 0; i < A.rows(); ++i) {
        Rational row(0);
        for (size_t j = 0; j < A.cols(); ++j)
            row += rat_abs(A.at(i, j));
        norm = std::max(norm, row);
    }
    Integer steps = ceil_rat(norm * delta / 4);
    if (steps < 1)
        steps = 1;
    auto E = taylor_exp_matrix(A, delta / Rational(steps), terms);
    IntervalVector cur = v;
    for (Integer k = 0; k < steps; ++k) {
        IntervalVector out(v.size(), Interval(0));
        for (size_t i = 0; i < v.size(); ++i)
            for (size_t j = 0; j < v.size(); ++j)
                out[i] += E[i][j] * cur[j];
        cur = std::move(out);
    }
    return cur;
}

ValidationReport check_invariance_sampled(const Formula &I, const RationalMatrix &A,
                                          const std::vector<RatVec> &samples, const std::vector<Rational> &deltas,
                                          const std::vector<std::string> &vars) {
    require(I.quantifier_free(), ErrorCode::InvalidInput, "invariance sampling needs a quantifier-free set");
    ValidationReport rep;
    size_t in = 0, pass = 0, unknown = 0;
    std::string fail_witness;
    for (auto &x : samples) {
        std::map<std::string, Rational> pt;
        for (size_t i = 0; i < vars.size(); ++i)
            pt[vars[i]] = x[i];
        if (!eval_formula(I, pt))
            continue;
        ++in;
        IntervalVector v;
        for (auto &c : x)
            v.emplace_back(c);
        for (auto &d : deltas) {
            int r = eval_on_box(I, vars, taylor_flow(A, v, d));
            if (r == 1) {
                ++pass;
            } else if (r == 0) {
                if (fail_witness.empty()) {
                    fail_witness = "x=(";
                    for (size_t i = 0; i < x.size(); ++i)
                        fail_witness += (i ? "," : "") + to_string(x[i]);
                    fail_witness += ") delta=" + to_string(d);
                }
            } else {
                ++unknown;
            }
        }
    }
    std::string counts = "points_in_I=" + std::to_string(in) + " pass=" + std::to_string(pass) +
                         " unknown=" + std::to_string(unknown);
    if (!fail_witness.empty())
        rep.add("invariance", CheckVerdict::Fail, fail_witness + " " + counts);
    else if (unknown > 0 || in == 0)
        rep.add("invariance", CheckVerdict::Unknown, counts);
    else
        rep.add("invariance", CheckVerdict::Pass, counts);
    return rep;
}

ValidationReport check_disjoint_sampled(const Formula &I, const Formula &Y, const std::vector<std::string> &vars,
                                        size_t samples, uint64_t seed, long span) {
    require(I.quantifier_free() && Y.quantifier_free(), ErrorCode::InvalidInput,
            "disjointness sampling needs quantifier-free sets");
    ValidationReport rep;
    std::mt19937_64 rng(seed);
    const long den = 8;
    std::uniform_int_distribution<long> num(-span * den, span * den);
    size_t inI = 0, inY = 0;
    for (size_t k = 0; k < samples; ++k) {
        std::map<std::string, Rational> pt;
        std::string text;
        for (auto &v : vars) {
            Rational q(num(rng), den);
            q.canonicalize();
            pt[v] = q;
            text += (text.empty() ? "" : ",") + to_string(q);
        }
        bool a = eval_formula(I, pt), b = eval_formula(Y, pt);
        inI += a;
        inY += b;
        if (a && b) {
            rep.add("disjoint", CheckVerdict::Fail, "common point (" + text + ")");
            return rep;
        }
    }
    rep.add("disjoint", CheckVerdict::Pass,
            "samples=" + std::to_string(samples) + " in_I=" + std::to_string(inI) + " in_Y=" + std::to_string(inY));
    return rep;
}

} // namespace ominv
