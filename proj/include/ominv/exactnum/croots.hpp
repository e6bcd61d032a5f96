#pragma once

#include "ominv/exactnum/interval.hpp"
#include "ominv/exactnum/poly.hpp"
#include "ominv/exactnum/realalg.hpp"

#include <vector>

namespace ominv {

// Certified enclosures of all complex roots of a squarefree rational
// polynomial. Order: real roots ascending, then complex roots with positive
// imaginary part (by real then imaginary part), each followed by its
// conjugate. The order is fixed at construction and kept by refine().
class ComplexRoots {
  public:
    ComplexRoots() = default;
    explicit ComplexRoots(const QPoly &squarefree, mpfr_prec_t bits = 128);

    size_t size() const { return boxes_.size(); }
    const ComplexInterval &box(size_t i) const { return boxes_[i]; }
    bool is_real(size_t i) const { return i < reals_.size(); }
    const RealAlgebraic &real_root(size_t i) const { return reals_[i]; }
    size_t conjugate_index(size_t i) const;
    mpfr_prec_t bits() const { return bits_; }
    const QPoly &poly() const { return q_; }

    // Tighten every enclosure to roughly the given precision.
    void refine(mpfr_prec_t bits);

  private:
    bool certify(mpfr_prec_t bits, const std::vector<ComplexInterval> *old);
    void newton(mpfr_prec_t bits, int steps);

    QPoly q_;
    std::vector<Rational> cre_, cim_;
    std::vector<ComplexInterval> boxes_;
    std::vector<RealAlgebraic> reals_;
    mpfr_prec_t bits_ = 0;
};

} // namespace ominv
