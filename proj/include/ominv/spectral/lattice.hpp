#pragma once

#include "ominv/exactnum/numfield.hpp"
#include "ominv/exactnum/rational.hpp"
#include "ominv/exactnum/realalg.hpp"

#include <string>
#include <vector>

namespace ominv {

// Basis of the integer relations {a in Z^k : sum a_i x_i = 0}.
struct RelationLattice {
    size_t k = 0;
    std::vector<IntVec> generators;

    size_t rank() const { return generators.size(); }
    bool contains(const IntVec &v) const;
    bool operator==(const RelationLattice &o) const;
    std::string to_string() const;
};

// Saturated integer kernel {a in Z^k : M a = 0} of an integer matrix with k
// columns, returned in row Hermite normal form.
std::vector<IntVec> integer_kernel(const std::vector<IntVec> &M, size_t k);

// Row Hermite normal form of the lattice spanned by the rows (zero rows dropped).
std::vector<IntVec> hermite_rows(std::vector<IntVec> rows, size_t k);

RelationLattice additive_relations(const std::vector<RealAlgebraic> &xs);
// Same, for elements already living in one field.
RelationLattice additive_relations(const std::vector<NFElem> &xs);

// Basis of the integer vectors orthogonal to every generator (a saturated
// lattice of rank k - rank).
std::vector<IntVec> orthogonal_complement(const RelationLattice &L);

Integer dot(const IntVec &a, const IntVec &b);

} // namespace ominv
