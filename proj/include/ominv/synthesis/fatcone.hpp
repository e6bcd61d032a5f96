#pragma once

#include "ominv/asymptotics/explog.hpp"
#include "ominv/synthesis/cone.hpp"
#include "ominv/synthesis/tail.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace ominv {

// Fat orbit cone: points
//   x_i = sum_a w_a sum_j r^j Re(G[a][i][j] tau_a)
// with s >= s1, delta <= r, r^q <= s^p (eps = p/q), w_a = s^{q_a} for some
// q in Box(ell, u) satisfying every rho-relation, and tau on the omega torus.
struct FatConeCertificate {
    RationalMatrix A;
    RatVec x0;
    Formula target;
    std::vector<std::string> state_vars;

    Rational s0, eps, delta, s1, y0;
    RatVec ell, u;
    RelationLattice rho_relations, omega_relations;
    // gap data: mu exact (absent when no atom has two exponent classes),
    // mu_lo its rational lower bound used for the box and gamma
    std::optional<NFElem> mu;
    Rational mu_lo;
    Integer M2;
    unsigned B = 0;
    Rational t_enter;
    Formula formula;
    size_t torus_boxes = 0;
    nlohmann::json provenance = nlohmann::json::object();
};

// Exact constants of the invariance conditions for eps = 1/N:
// y0 = 2^{N i}, least i with log y0 >= N and y0^{1/N} >= max(log y0, 2).
Rational invariance_y0(const Rational &eps);
// max(2, 2^{1/eps}, ((y0-1)/(y0^eps-1))^{1/eps}, (1/eps)^{1/eps}).
Rational invariance_s1_floor(const Rational &eps, const Rational &y0);

// Largest eps = 1/N with eps * 3B <= mu_lo; 1 when B = 0.
Rational choose_eps(const Rational &mu_lo, unsigned B);

// Least dyadic box width w = 2^-j with 4 M2 k w^2 <= mu_lo^2.
Rational box_width(const Rational &mu_lo, const Integer &M2, size_t k);

std::vector<std::vector<AtomExpansion>> analyze_target(const ConeSpec &C, const Formula &Y,
                                                       const std::vector<std::string> &state_vars);
// mu, M^2 and B over the exponent vectors of every atom of the target.
GapData target_gap(const ConeSpec &C, const std::vector<std::vector<AtomExpansion>> &X);

struct FatThresholds {
    Rational s0, delta;
    size_t boxes = 0;
};
// s0 and delta for the given eps, mu_lo and B from a complete torus cover;
// throws NoCertificate when the cover is incomplete.
FatThresholds fat_cone_thresholds(const ConeSpec &C, const std::vector<std::vector<AtomExpansion>> &X,
                                  const Rational &eps, const Rational &mu_lo, unsigned B, const TailOptions &opt = {});

// max(ceil log max(s1, y0), delta)
Rational fat_cone_entry(const FatConeCertificate &cert);

FatConeCertificate synthesize_fat_cone(const ConeSpec &C, const Formula &Y, const std::vector<std::string> &state_vars,
                                       const TailOptions &opt = {});

// The existential fat-cone formula over the state variables.
Formula fat_cone_formula(const ConeSpec &C, const FatConeCertificate &cert);

// Field element as a polynomial in the generator variable "g".
MPoly field_poly(const NFElem &c);
// minpoly(g) = 0 with g in an isolating interval; truth over Q.
Formula generator_guard(const FieldPtr &K);

nlohmann::json certificate_to_json(const FatConeCertificate &c);
FatConeCertificate certificate_from_json(const nlohmann::json &j);

// Exact-rational matrix helpers shared with the CLI.
nlohmann::json matrix_to_json(const RationalMatrix &A);
RationalMatrix matrix_from_json(const nlohmann::json &j);
nlohmann::json ratvec_to_json(const RatVec &v);
RatVec ratvec_from_json(const nlohmann::json &j);
nlohmann::json lattice_to_json(const RelationLattice &L);
RelationLattice lattice_from_json(const nlohmann::json &j);

// s^e when it is rational.
std::optional<Rational> exact_power(const Rational &s, const Rational &e);

// Values of every variable of the fat-cone formula (bound block and state)
// at w_a = s^{q_a}, given r and tau; nullopt when a power is irrational.
std::optional<std::map<std::string, NFElem>> fat_assignment(const ConeSpec &C, const FatConeCertificate &cert,
                                                            const Rational &s, const Rational &r, const RatVec &q,
                                                            const std::vector<CElem> &tau);

} // namespace ominv
