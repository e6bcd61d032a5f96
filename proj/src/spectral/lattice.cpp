#include "ominv/spectral/lattice.hpp"
#include "ominv/error.hpp"

#include <sstream>

namespace ominv {

Integer dot(const IntVec &a, const IntVec &b) {
    Integer s = 0;
    for (size_t i = 0; i < a.size() && i < b.size(); ++i)
        s += a[i] * b[i];
    return s;
}

static bool is_zero_vec(const IntVec &v) {
    for (auto &x : v)
        if (x != 0)
            return false;
    return true;
}

std::vector<IntVec> hermite_rows(std::vector<IntVec> rows, size_t k) {
    std::vector<IntVec> out;
    size_t r = 0;
    for (size_t c = 0; c < k && r < rows.size(); ++c) {
        // gcd-combine column c into row r
        for (size_t i = r + 1; i < rows.size(); ++i) {
            if (rows[i][c] == 0)
                continue;
            if (rows[r][c] == 0) {
                std::swap(rows[r], rows[i]);
                continue;
            }
            Integer g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), rows[r][c].get_mpz_t(), rows[i][c].get_mpz_t());
            Integer a = rows[r][c] / g, b = rows[i][c] / g;
            IntVec nr(k), ni(k);
            for (size_t j = 0; j < k; ++j) {
                nr[j] = s * rows[r][j] + t * rows[i][j];
                ni[j] = -b * rows[r][j] + a * rows[i][j];
            }
            rows[r] = std::move(nr);
            rows[i] = std::move(ni);
        }
        if (rows[r][c] == 0)
            continue;
        if (rows[r][c] < 0)
            for (auto &x : rows[r])
                x = -x;
        for (size_t i = 0; i < r; ++i) {
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[r][c].get_mpz_t());
            if (q != 0)
                for (size_t j = 0; j < k; ++j)
                    rows[i][j] -= q * rows[r][j];
        }
        ++r;
    }
    for (size_t i = 0; i < r; ++i)
        if (!is_zero_vec(rows[i]))
            out.push_back(rows[i]);
    return out;
}

std::vector<IntVec> integer_kernel(const std::vector<IntVec> &M, size_t k) {
    std::vector<IntVec> H = M;
    // columns of U as vectors
    std::vector<IntVec> U(k, IntVec(k));
    for (size_t j = 0; j < k; ++j)
        U[j][j] = 1;
    auto colop = [&](size_t p, size_t q, const Integer &s, const Integer &t, const Integer &u, const Integer &v) {
        // (col p, col q) <- (s p + t q, u p + v q)
        for (auto &row : H) {
            Integer a = row[p], b = row[q];
            row[p] = s * a + t * b;
            row[q] = u * a + v * b;
        }
        for (size_t i = 0; i < k; ++i) {
            Integer a = U[p][i], b = U[q][i];
            U[p][i] = s * a + t * b;
            U[q][i] = u * a + v * b;
        }
    };
    size_t col = 0;
    for (size_t i = 0; i < H.size() && col < k; ++i) {
        require(H[i].size() == k, ErrorCode::ShapeMismatch, "integer matrix row length");
        for (size_t j = col + 1; j < k; ++j) {
            if (H[i][j] == 0)
                continue;
            if (H[i][col] == 0) {
                colop(col, j, 0, 1, 1, 0);
                continue;
            }
            Integer g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), H[i][col].get_mpz_t(), H[i][j].get_mpz_t());
            Integer a = H[i][col] / g, b = H[i][j] / g;
            colop(col, j, s, t, -b, a);
        }
        if (H[i][col] != 0)
            ++col;
    }
    std::vector<IntVec> ker(U.begin() + col, U.end());
    return hermite_rows(ker, k);
}

bool RelationLattice::contains(const IntVec &v0) const {
    if (v0.size() != k)
        return false;
    IntVec v = v0;
    for (const auto &g : generators) {
        size_t c = 0;
        while (c < k && g[c] == 0)
            ++c;
        if (c == k)
            continue;
        if (v[c] % g[c] != 0)
            return false;
        Integer q = v[c] / g[c];
        for (size_t j = 0; j < k; ++j)
            v[j] -= q * g[j];
    }
    return is_zero_vec(v);
}

bool RelationLattice::operator==(const RelationLattice &o) const {
    if (k != o.k || rank() != o.rank())
        return false;
    for (auto &g : generators)
        if (!o.contains(g))
            return false;
    for (auto &g : o.generators)
        if (!contains(g))
            return false;
    return true;
}

std::string RelationLattice::to_string() const {
    std::ostringstream os;
    os << "{";
    for (size_t i = 0; i < generators.size(); ++i) {
        os << (i ? ", " : "") << "(";
        for (size_t j = 0; j < k; ++j)
            os << (j ? "," : "") << generators[i][j].get_str();
        os << ")";
    }
    os << "}";
    return os.str();
}

RelationLattice additive_relations(const std::vector<NFElem> &xs) {
    RelationLattice L;
    L.k = xs.size();
    if (xs.empty())
        return L;
    size_t n = 0;
    for (auto &x : xs)
        n = std::max<size_t>(n, x.field() ? x.field()->degree() : 1);
    std::vector<IntVec> M;
    for (size_t r = 0; r < n; ++r) {
        std::vector<Rational> row(xs.size());
        Integer den = 1;
        for (size_t i = 0; i < xs.size(); ++i) {
            row[i] = xs[i].poly().coeff(r);
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), row[i].get_den_mpz_t());
        }
        IntVec zr(xs.size());
        for (size_t i = 0; i < xs.size(); ++i)
            zr[i] = Integer(row[i] * den);
        M.push_back(zr);
    }
    L.generators = integer_kernel(M, L.k);
    for (const auto &g : L.generators) {
        NFElem s(xs[0].field(), Rational(0));
        for (size_t i = 0; i < xs.size(); ++i)
            s += xs[i] * Rational(g[i]);
        if (!s.is_zero())
            fail(ErrorCode::Internal, "relation generator fails exact verification");
    }
    return L;
}

RelationLattice additive_relations(const std::vector<RealAlgebraic> &xs) {
    if (xs.empty())
        return RelationLattice{};
    CommonField cf = common_field(xs);
    return additive_relations(cf.elements);
}

std::vector<IntVec> orthogonal_complement(const RelationLattice &L) {
    if (L.generators.empty()) {
        std::vector<IntVec> id(L.k, IntVec(L.k));
        for (size_t i = 0; i < L.k; ++i)
            id[i][i] = 1;
        return id;
    }
    return integer_kernel(L.generators, L.k);
}

} // namespace ominv
