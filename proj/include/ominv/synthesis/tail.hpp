#pragma once

#include "ominv/asymptotics/explog.hpp"
#include "ominv/semialg/boxqe.hpp"
#include "ominv/synthesis/cone.hpp"

#include <utility>
#include <vector>

namespace ominv {

struct TailOptions {
    unsigned depth_cap = 12;
    size_t max_boxes_per_level = size_t(1) << 14;
    mpfr_prec_t precision = 128;
    bool parallel = true;
};

using ThetaBox = std::vector<std::pair<Rational, Rational>>;

// Interval data of one atom on one theta box: the dominant coefficient
// h_{e*,b*} has modulus >= mstar and the sign that violates the atom; every
// other coefficient is bounded in modulus.
struct BoxAtomData {
    size_t atom = 0;
    bool symbolic_zero = false;
    size_t cls = 0;
    unsigned bstar = 0;
    Rational mstar;
    // same class, lower r-degree: (b, bound)
    std::vector<std::pair<unsigned, Rational>> lower;
    // other classes: (class index, b, bound)
    struct Other {
        size_t cls;
        unsigned b;
        Rational bound;
    };
    std::vector<Other> others;
};

// Atom strictly violated on the box for all large s, with its data.
std::optional<BoxAtomData> violation_on_box(const AtomExpansion &X, const std::vector<Interval> &theta);

struct TailCover {
    bool complete = false;
    unsigned depth = 0;
    size_t boxes_examined = 0;
    std::vector<ThetaBox> boxes;
    // per certified box, per disjunct
    std::vector<std::vector<BoxAtomData>> data;
};

// Subdivides [0, 2pi]^q until every box has, for every disjunct, a violated
// atom. Incomplete covers stop at the depth cap.
TailCover cover_torus(const ConeSpec &C, const std::vector<std::vector<AtomExpansion>> &dnf,
                      const TailOptions &opt);

std::vector<Interval> box_intervals(const ThetaBox &b);

// ExpLogSum over Q lower-bounding |atom| minus the rest: positive for large s.
ExpLogSum tail_bound_sum(const AtomExpansion &X, const BoxAtomData &D, const FieldPtr &K);

// s0 >= 1 with the atom's sign fixed for all s >= s0 on the box.
Rational tail_threshold(const AtomExpansion &X, const BoxAtomData &D, const FieldPtr &K);

// sign_threshold with s0 = 1 for a single constant term.
Rational eventual_threshold(const ExpLogSum &S);

// ceil(log s0) for s0 >= 1.
Integer ceil_log(const Rational &s0);

} // namespace ominv
