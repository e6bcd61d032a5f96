#pragma once

#include "ominv/exactnum/numfield.hpp"
#include "ominv/exactnum/poly.hpp"
#include "ominv/exactnum/rational.hpp"

#include <string>
#include <vector>

namespace ominv {

// Dense row-major rational matrix.
class RationalMatrix {
  public:
    RationalMatrix() = default;
    RationalMatrix(size_t rows, size_t cols);
    RationalMatrix(size_t rows, size_t cols, std::vector<Rational> entries);
    RationalMatrix(std::initializer_list<std::initializer_list<long>> rows);
    static RationalMatrix identity(size_t n);
    static RationalMatrix diag(const std::vector<Rational> &d);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    Rational &at(size_t i, size_t j) { return a_[i * cols_ + j]; }
    const Rational &at(size_t i, size_t j) const { return a_[i * cols_ + j]; }
    const std::vector<Rational> &entries() const { return a_; }

    RationalMatrix operator*(const RationalMatrix &o) const;
    RationalMatrix operator+(const RationalMatrix &o) const;
    RationalMatrix operator-(const RationalMatrix &o) const;
    RationalMatrix operator*(const Rational &c) const;
    RatVec operator*(const RatVec &v) const;
    bool operator==(const RationalMatrix &o) const;
    RationalMatrix transpose() const;
    Rational trace() const;
    bool is_zero() const;

    // {"rows": r, "cols": c, "entries": [["p/q", ...], ...]}
    std::string to_json() const;
    static RationalMatrix from_json(const std::string &text);

  private:
    size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> a_;
};

// det(xI - A)
QPoly char_poly(const RationalMatrix &A);

// Dense matrices over a number field.
using NFMatrix = std::vector<std::vector<NFElem>>;

NFMatrix nf_matrix(const FieldPtr &K, const RationalMatrix &A);
NFMatrix nf_zero(const FieldPtr &K, size_t r, size_t c);
NFMatrix nf_mul(const NFMatrix &a, const NFMatrix &b);
std::vector<NFElem> nf_mul(const NFMatrix &a, const std::vector<NFElem> &v);
NFMatrix nf_transpose(const NFMatrix &a);
// Reduced row echelon form in place; returns pivot columns.
std::vector<size_t> nf_rref(NFMatrix &a);
size_t nf_rank(NFMatrix a);
// Basis of the right kernel, one vector per free column.
std::vector<std::vector<NFElem>> nf_kernel(const NFMatrix &a);
NFMatrix nf_inverse(const NFMatrix &a);

} // namespace ominv
