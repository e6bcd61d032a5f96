#pragma once

#include "ominv/exactnum/poly.hpp"

#include <utility>
#include <vector>

namespace ominv {

// Yun decomposition over Q: f = c * prod s_i^i with s_i monic squarefree coprime.
std::vector<std::pair<QPoly, unsigned>> squarefree_decomposition(const QPoly &f);

// Irreducible factors over Z of a nonconstant polynomial, primitive with
// positive leading coefficient, with multiplicities; sorted by degree then
// coefficients.
std::vector<std::pair<ZPoly, unsigned>> factor_z(const ZPoly &f);
// Same as factor_z but returns monic rational factors.
std::vector<std::pair<QPoly, unsigned>> factor_q(const QPoly &f);
// Distinct irreducible monic factors.
std::vector<QPoly> irreducible_factors(const QPoly &f);
bool is_irreducible(const QPoly &f);

} // namespace ominv
