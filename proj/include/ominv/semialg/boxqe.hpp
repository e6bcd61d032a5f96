#pragma once

#include "ominv/exactnum/interval.hpp"
#include "ominv/semialg/formula.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ominv {

enum class Verdict { True, False, Unknown };
enum class UnknownReason { None, DepthExhausted, BackendMissing, TangentialSuspected };
const char *verdict_name(Verdict v);
const char *reason_name(UnknownReason r);

struct ThreeValued {
    Verdict verdict = Verdict::Unknown;
    UnknownReason reason = UnknownReason::None;
    // counterexample for False
    std::map<std::string, Rational> witness;
    // deepest level visited
    unsigned depth = 0;
    size_t boxes = 0;

    static ThreeValued yes() { return {Verdict::True, UnknownReason::None, {}, 0, 0}; }
    static ThreeValued no() { return {Verdict::False, UnknownReason::None, {}, 0, 0}; }
    static ThreeValued unknown(UnknownReason r) { return {Verdict::Unknown, r, {}, 0, 0}; }
};

using Box = std::map<std::string, std::pair<Rational, Rational>>;

struct BoxOptions {
    unsigned depth_cap = 16;
    size_t max_boxes_per_level = size_t(1) << 18;
    mpfr_prec_t precision = 128;
    bool parallel = true;
};

// Kleene value of a quantifier-free formula over a box: 1 true everywhere,
// 0 false everywhere, 2 undetermined.
int eval_on_box(const Formula &phi, const std::vector<std::string> &order, const std::vector<Interval> &box);

// forall x in box: phi. True carries an interval proof covering the box,
// False an exactly checked rational counterexample (lexicographically least
// among those found at the shallowest level), Unknown otherwise.
ThreeValued decide_forall_box(const Formula &phi, const Box &bounds, const BoxOptions &opt = {});

} // namespace ominv
