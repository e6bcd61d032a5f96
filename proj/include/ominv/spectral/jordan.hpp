#pragma once

#include "ominv/exactnum/croots.hpp"
#include "ominv/exactnum/numfield.hpp"
#include "ominv/spectral/matrix.hpp"

#include <memory>
#include <vector>

namespace ominv {

// Generalized eigenvectors for one irreducible factor q of the characteristic
// polynomial, computed over K = Q(theta). The columns for every other root of
// q are the images of V under the corresponding embedding.
struct EigenFactor {
    QPoly q;
    int multiplicity = 0;
    FieldPtr K;
    std::shared_ptr<ComplexRoots> roots;
    // chain lengths in V column order
    std::vector<size_t> chains;
    // d x m, each chain stored eigenvector first
    NFMatrix V;
    // m x d with W V = I
    NFMatrix W;
};

struct JordanBlock {
    size_t factor = 0;
    size_t root = 0;
    size_t chain = 0;
    size_t size = 0;
    // first column of the chain in V (and row in W)
    size_t vcol = 0;
    ComplexAlgebraic lambda;
};

// A = P J P^{-1} with J block diagonal, each block upper bidiagonal.
struct JordanData {
    size_t dim = 0;
    std::vector<EigenFactor> factors;
    std::vector<JordanBlock> blocks;
    // first column of each block in P
    std::vector<size_t> offset;

    size_t block_of_column(size_t col) const;
    // V entry feeding P(i, col), as an element of the factor field
    const NFElem &P_elem(size_t i, size_t col) const;
    const NFElem &Pinv_elem(size_t row, size_t j) const;

    // Enclosures under the block's embedding; refine() first for tighter boxes.
    ComplexInterval P_enclosure(size_t i, size_t col) const;
    ComplexInterval Pinv_enclosure(size_t row, size_t j) const;
    ComplexInterval lambda_enclosure(size_t block) const;
    void refine(mpfr_prec_t bits) const;

    // Exact complex algebraic entries.
    ComplexAlgebraic P_entry(size_t i, size_t col) const;
    ComplexAlgebraic Pinv_entry(size_t row, size_t j) const;
};

struct SpectralData {
    std::vector<RealAlgebraic> rho, omega;
    // d x d polynomial matrix in t
    std::vector<std::vector<QPoly>> Qt;
};

struct JordanDecomposition {
    JordanData jordan;
    SpectralData spectral;
};

JordanDecomposition jordan_decompose(const RationalMatrix &A);

struct JordanCheck {
    bool AP_eq_PJ = false;
    bool P_Pinv_identity = false;
};
// Exact re-verification of A P = P J and P Pinv = I.
JordanCheck verify_jordan(const RationalMatrix &A, const JordanData &J);

// Q(a) Q(b) = Q(a + b) as a polynomial identity in two variables.
bool verify_q_semigroup(const SpectralData &S);

// Exact complex value of an element of K = Q(theta) at a given root of q.
ComplexAlgebraic complex_value(const NFElem &z, const EigenFactor &f, size_t root);

} // namespace ominv
