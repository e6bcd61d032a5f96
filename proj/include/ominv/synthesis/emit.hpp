#pragma once

#include "ominv/synthesis/cone.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ominv {

struct MembershipSample {
    bool exact = false;
    std::vector<NFElem> state;
    std::vector<Interval> enclosure;
};

// Cone point at time t (s = e^t) and torus point tau_a = re + i im per active
// block. Exact when every rho_a t vanishes; interval enclosure otherwise.
// Throws NotOnTorus when tau is off the omega torus.
MembershipSample cone_membership_sample(const ConeSpec &C, const Rational &t,
                                        const std::vector<std::pair<Rational, Rational>> &tau);

struct ExtendedInvariant {
    std::string text;
    bool decidable = false;
    std::string note;
};

// C_{t0} union {e^{At} x0 : 0 <= t <= t0} in an extended S-expression
// language with exp, cos and sin.
ExtendedInvariant emit_whole_orbit_invariant(const ConeSpec &C, const Rational &t0,
                                             const std::vector<std::string> &state_vars);

} // namespace ominv
