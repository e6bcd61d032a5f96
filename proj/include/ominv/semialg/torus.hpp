#pragma once

#include "ominv/semialg/formula.hpp"
#include "ominv/spectral/lattice.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ominv {

// Names (c_l, s_l) for coordinate l, 1-based: c1, s1, c2, s2, ...
std::pair<std::string, std::string> torus_var_names(size_t l);

// Real and imaginary parts of prod tau_l^{a_l} over the torus variables;
// negative powers use the conjugate.
std::pair<MPoly, MPoly> torus_character(const IntVec &a,
                                        const std::vector<std::pair<std::string, std::string>> &names);

// c_l^2 + s_l^2 = 1 for every coordinate and, per generator a, the real and
// imaginary part of prod tau_l^{a_l} = 1.
Formula build_torus_formula(const RelationLattice &rel);
Formula build_torus_formula(const RelationLattice &rel,
                            const std::vector<std::pair<std::string, std::string>> &names);

} // namespace ominv
