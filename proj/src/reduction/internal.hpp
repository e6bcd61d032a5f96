#pragma once

#include "ominv/reduction/reduction.hpp"

namespace ominv::detail {

// Coefficient polynomial in the field generator, named "g".
MPoly nf_to_mpoly(const NFElem &e);
// Bind g to the real generator of K when the body mentions it.
Formula close_over_field(const FieldPtr &K, const Formula &body);
// N_K(sum_k beta_k x_k) as a rational polynomial.
MPoly norm_form(const std::vector<NFElem> &beta, const std::vector<std::string> &vars);
MPoly linear_form(const RatVec &row, const std::vector<std::string> &vars);
RatVec solve_square(RationalMatrix M, RatVec b);

} // namespace ominv::detail
