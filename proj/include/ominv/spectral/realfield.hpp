#pragma once

#include "ominv/spectral/jordan.hpp"
#include "ominv/spectral/lattice.hpp"

#include <vector>

namespace ominv {

// Complex number a + b i with a, b in a real number field.
struct CElem {
    NFElem re, im;
    CElem() = default;
    CElem(NFElem r, NFElem i) : re(std::move(r)), im(std::move(i)) {}
    static CElem real(const NFElem &r);
    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    CElem conj() const { return {re, -im}; }
    CElem &operator+=(const CElem &o);
    CElem &operator-=(const CElem &o);
    friend CElem operator+(CElem a, const CElem &b) { return a += b; }
    friend CElem operator-(CElem a, const CElem &b) { return a -= b; }
    friend CElem operator*(const CElem &a, const CElem &b);
    friend CElem operator*(const CElem &a, const NFElem &b);
    bool operator==(const CElem &o) const { return re == o.re && im == o.im; }
};

// F = Q(rho_l, omega_l : all blocks) with its real embedding; every entry of
// P and P^{-1} has real and imaginary parts in F.
struct SpectralField {
    FieldPtr field;
    std::vector<NFElem> rho, omega;

    static SpectralField build(const JordanData &J, const SpectralData &S);

    NFElem constant(const Rational &c) const { return NFElem(field, c); }
    // Value of z in Q(theta_f) at the root carried by block l.
    CElem at_block(const NFElem &z, size_t block) const;
    CElem lambda(size_t block) const { return {rho[block], omega[block]}; }
};

struct GaussRat {
    Rational re, im;
};
using GaussMatrix = std::vector<std::vector<GaussRat>>;

// True iff P diag(C_1, ..., C_k) P^{-1} has exactly zero imaginary part.
bool reality_check(const JordanData &J, const SpectralField &F, const std::vector<GaussMatrix> &C);

} // namespace ominv
