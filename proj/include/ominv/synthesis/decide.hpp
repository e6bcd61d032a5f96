#pragma once

#include "ominv/semialg/qe.hpp"
#include "ominv/synthesis/fatcone.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace ominv {

enum class DecideMode { Auto, Backend, Builtin };
enum class Outcome { Exists, NotExists, Unknown };

const char *outcome_name(Outcome o);
const char *mode_name(DecideMode m);
DecideMode parse_mode(const std::string &s);

struct DecideConfig {
    DecideMode mode = DecideMode::Auto;
    QeBackend *backend = nullptr;
    TailOptions tail;
    QeOptions qe;
    // defaults to x1..xd
    std::vector<std::string> state_vars;
    bool certify = true;
};

struct NotExistsWitness {
    // "torus-ones" (fixed torus point plus tail membership) or "backend-U"
    std::string kind;
    size_t disjunct = 0;
    Rational s;
    bool exact = false;
    // exact state or enclosures as text
    std::vector<std::string> state;
    std::string description;
};

struct DecisionOutcome {
    Outcome verdict = Outcome::Unknown;
    UnknownReason reason = UnknownReason::None;
    DecideMode mode_used = DecideMode::Builtin;
    Integer t0;
    Rational s0;
    std::optional<FatConeCertificate> certificate;
    std::string certificate_error;
    std::optional<NotExistsWitness> witness;
    size_t boxes = 0;
    unsigned depth = 0;
    nlohmann::json transcript = nlohmann::json::object();
};

// A variable-to-state-variable map: a single "x" names x1 when d = 1.
std::vector<std::string> resolve_state_vars(const Formula &Y, size_t d, const std::vector<std::string> &given);

DecisionOutcome decide_eventual(const RationalMatrix &A, const RatVec &x0, const Formula &Y,
                                const DecideConfig &cfg = {});

// Building blocks of the two modes.
std::optional<NotExistsWitness> torus_ones_witness(const ConeSpec &C, const std::vector<std::vector<AtomExpansion>> &X,
                                                   const Formula &Y, const std::vector<std::string> &vars,
                                                   mpfr_prec_t prec);
// Quantified request of the backend mode: for all torus points, the class
// state with free class variables v<c>_<j> = s^rho r^j avoids Y.
Formula backend_request(const ConeSpec &C, const Formula &Y, const std::vector<std::string> &vars);
LambdaData backend_lambda(const ConeSpec &C);

nlohmann::json outcome_to_json(const DecisionOutcome &o);

} // namespace ominv
