#pragma once

#include "ominv/synthesis/fatcone.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace ominv {

using IntervalVector = std::vector<Interval>;

enum class CheckVerdict { Pass, Fail, Unknown };
const char *check_verdict_name(CheckVerdict v);

struct CheckEntry {
    std::string name;
    CheckVerdict verdict;
    std::string evidence;
};

struct ValidationReport {
    std::vector<CheckEntry> checks;
    void add(std::string name, CheckVerdict v, std::string evidence);
    void merge(const ValidationReport &o);
    // fail iff some check fails; unknown iff none fails and some is unknown
    CheckVerdict overall() const;
    // one line per check: "<name> <verdict> <evidence>"
    std::string text() const;
    nlohmann::json to_json() const;
};

// Jordan-based enclosure of e^{At} x0, centred, of width exactly 2^{1-bits} S
// with S the largest power of two <= max(1, |x|).
IntervalVector orbit_enclosure(const RationalMatrix &A, const RatVec &x0, const Rational &t, unsigned bits);

// Independent 60-term Taylor enclosure of e^{A delta} v with a tail bound,
// applied in steps with norm(A) * step <= 4.
IntervalVector taylor_flow(const RationalMatrix &A, const IntervalVector &v, const Rational &delta,
                           unsigned terms = 60);
std::vector<IntervalVector> taylor_exp_matrix(const RationalMatrix &A, const Rational &delta, unsigned terms = 60);

// Quantifier-free I: flowed enclosures of sample points in I must stay in I.
ValidationReport check_invariance_sampled(const Formula &I, const RationalMatrix &A,
                                          const std::vector<RatVec> &samples, const std::vector<Rational> &deltas,
                                          const std::vector<std::string> &vars);

// Quantifier-free I and Y: seeded rational points in [-span, span]^d.
ValidationReport check_disjoint_sampled(const Formula &I, const Formula &Y, const std::vector<std::string> &vars,
                                        size_t samples, uint64_t seed = 1, long span = 4);

// Exact membership of a rational point in the fat cone of a certificate.
Verdict fat_cone_member(const ConeSpec &C, const FatConeCertificate &cert, const RatVec &y);

struct ValidateOptions {
    size_t invariance_samples = 1000;
    size_t disjoint_samples = 200;
    size_t tail_samples = 50;
    uint64_t seed = 1;
    mpfr_prec_t precision = 128;
    bool parallel = true;
};

ValidationReport validate_certificate(const FatConeCertificate &cert, const RationalMatrix &A, const RatVec &x0,
                                      const Formula &Y, const ValidateOptions &opt = {});

// The ten corrupted variants used by the mutation suite, with their labels.
std::vector<std::pair<std::string, FatConeCertificate>> certificate_mutations(const FatConeCertificate &cert);

} // namespace ominv
