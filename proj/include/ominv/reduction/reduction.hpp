#pragma once

#include "ominv/checker/checker.hpp"
#include "ominv/exactnum/numfield.hpp"
#include "ominv/exactnum/realalg.hpp"
#include "ominv/semialg/formula.hpp"
#include "ominv/spectral/matrix.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace ominv {

// "p/q", "sqrt(q)", "-sqrt(q)", an integer, or {"minpoly": [...], "interval": [lo, hi]}.
RealAlgebraic parse_algebraic(const nlohmann::json &j);

// f(t) = sum_i a_i e^{rho_i t} on [0, t0].
struct ExponentialPolynomial {
    std::vector<RealAlgebraic> a, rho;
    Rational t0;

    // {"terms": [[coeff, rate], ...], "t0": "p/q"}
    static ExponentialPolynomial parse(const std::string &text);
    static ExponentialPolynomial from_json(const nlohmann::json &j);
    nlohmann::json to_json() const;

    size_t terms() const { return a.size(); }
    // Equal rates merged, zero coefficients dropped, rates shifted by the
    // returned rational so that all are strictly positive.
    ExponentialPolynomial normalize(Rational *shift = nullptr) const;
    Interval eval(const Interval &t) const;
    Interval derivative(const Interval &t) const;
    std::string to_string() const;
};

struct ReductionInstance {
    RationalMatrix A;
    RatVec x0;
    // x1..xd
    std::vector<std::string> vars;
    // sum a_i y_i = 0 and 0 <= T <= t0 with conjugate products clearing algebraic coefficients
    Formula Y;
    // the same set with the field generator g bound explicitly; equals Y when coefficients are rational
    Formula Y_exact;
    // the target in Jordan coordinates x1..xn (rates) and x_{n+1} (time)
    Formula phi;
    bool rational_target = false;

    ExponentialPolynomial g; // normalized input
    Rational shift;
    std::vector<QPoly> factors; // distinct minimal polynomials of the rates
    QPoly companion_poly;       // product of factors times x^2

    // number field containing all coefficients and rates
    FieldPtr K;
    std::vector<NFElem> a, rho;
    // change of basis: y_i(x) = coord_rows[i] . x, T(x) = time_row . x, z2(x) = unit_row . x
    std::vector<std::vector<NFElem>> coord_rows;
    RatVec time_row, unit_row;
    // L(x) = sum_k beta_k x_k = sum_i a_i y_i(x)
    std::vector<NFElem> beta;
    std::string equivalence_note;

    // {"system": {"matrix", "x0"}, "target", "state_vars", "reduction": {...}}
    nlohmann::json problem_json() const;
};

ReductionInstance build_reduction(const ExponentialPolynomial &f, unsigned degree_cap = 64);

// Companion matrix with ones on the superdiagonal and last row -c_0..-c_{d-1}.
RationalMatrix companion_matrix(const QPoly &monic);

struct TubeInvariant {
    unsigned n = 0;
    Rational mu;
    Rational t0;
    FieldPtr K;
    NFElem rho;
    // ascending coefficients in t
    std::vector<NFElem> P, Q;
    unsigned n0 = 0;
    bool upper_certified = false;
    ValidationReport report;

    Interval eval_P(const Interval &t) const;
    Interval eval_Q(const Interval &t) const;
    // (or (and 0<=t<=t0 P(t)<=y [y<=Q(t)]) (t>t0)); lower, upper or both
    Formula formula(const std::string &y, const std::string &t, bool lower, bool upper) const;
};

// Least n with X^n/n! e^X < (mu-1)/mu, X = mu rho t0; 0 when rho = 0.
unsigned tube_threshold(const RealAlgebraic &rho, const Rational &t0, const Rational &mu);

// Lower curve only; valid for every n.
TubeInvariant lower_tube(const RealAlgebraic &rho, const Rational &t0, unsigned n);

// Throws BelowThreshold when n < tube_threshold.
TubeInvariant tube_invariant(const RealAlgebraic &rho, const Rational &t0, unsigned n, const Rational &mu);

enum class ZeroStatus { NoZero, ZeroFound, Unknown };
const char *zero_status_name(ZeroStatus s);

struct ZeroCertificate {
    ZeroStatus status = ZeroStatus::Unknown;
    // sign-change bracket for ZeroFound, offending piece for Unknown
    Rational lo, hi;
    int sign = 0; // sign of f on [0, t0] for NoZero
    size_t pieces = 0;
    unsigned max_depth = 0;
    std::string evidence;
    nlohmann::json to_json() const;
};

struct ZeroOptions {
    unsigned depth = 40;
    size_t max_pieces = 1 << 20;
    unsigned refine_bits = 80;
    mpfr_prec_t precision = 128;
};

ZeroCertificate certify_zero_freeness(const ExponentialPolynomial &f, const ZeroOptions &opt = {});

struct TubeSearchOptions {
    std::vector<unsigned> n_schedule = {1, 2, 4, 8, 16, 32};
    unsigned mu_steps = 12; // mu = 1 + 2^-j, j = 0..mu_steps-1
    unsigned depth = 24;
    mpfr_prec_t precision = 128;
};

struct TubeCertificate {
    bool found = false;
    unsigned n = 0;
    Rational mu;
    std::vector<bool> two_sided;
    size_t pieces = 0;
    size_t candidates = 0;
    // over x1..x_{n+1} (Jordan coordinates)
    Formula jordan_invariant;
    // over the original state variables, without and with the z2 = 1 constraint
    Formula invariant_body, invariant;
    std::string reason;
    nlohmann::json to_json() const;
};

// Requires certify_zero_freeness(inst.g) to return NoZero; throws InvalidInput otherwise.
TubeCertificate invariant_from_tubes(const ReductionInstance &inst, const ExponentialPolynomial &f,
                                     const TubeSearchOptions &opt = {});

// Containment of x0, sampled invariance of the body, sampled disjointness from Y.
ValidationReport validate_tube_certificate(const ReductionInstance &inst, const TubeCertificate &cert,
                                           size_t samples = 200, uint64_t seed = 1);

} // namespace ominv
