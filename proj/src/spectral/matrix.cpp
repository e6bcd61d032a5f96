#include "ominv/spectral/matrix.hpp"
#include "ominv/error.hpp"

#include "json.hpp"

namespace ominv {

RationalMatrix::RationalMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

RationalMatrix::RationalMatrix(size_t rows, size_t cols, std::vector<Rational> entries)
    : rows_(rows), cols_(cols), a_(std::move(entries)) {
    require(a_.size() == rows * cols, ErrorCode::ShapeMismatch, "entry count does not match shape");
}

RationalMatrix::RationalMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    for (auto &r : rows) {
        require(r.size() == cols_, ErrorCode::ShapeMismatch, "ragged matrix literal");
        for (long v : r)
            a_.emplace_back(v);
    }
}

RationalMatrix RationalMatrix::identity(size_t n) {
    RationalMatrix m(n, n);
    for (size_t i = 0; i < n; ++i)
        m.at(i, i) = 1;
    return m;
}

RationalMatrix RationalMatrix::diag(const std::vector<Rational> &d) {
    RationalMatrix m(d.size(), d.size());
    for (size_t i = 0; i < d.size(); ++i)
        m.at(i, i) = d[i];
    return m;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix &o) const {
    require(cols_ == o.rows_, ErrorCode::ShapeMismatch, "matrix product shape");
    RationalMatrix r(rows_, o.cols_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t k = 0; k < cols_; ++k) {
            const Rational &x = at(i, k);
            if (x == 0)
                continue;
            for (size_t j = 0; j < o.cols_; ++j)
                r.at(i, j) += x * o.at(k, j);
        }
    return r;
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix &o) const {
    require(rows_ == o.rows_ && cols_ == o.cols_, ErrorCode::ShapeMismatch, "matrix sum shape");
    RationalMatrix r = *this;
    for (size_t i = 0; i < a_.size(); ++i)
        r.a_[i] += o.a_[i];
    return r;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix &o) const {
    require(rows_ == o.rows_ && cols_ == o.cols_, ErrorCode::ShapeMismatch, "matrix difference shape");
    RationalMatrix r = *this;
    for (size_t i = 0; i < a_.size(); ++i)
        r.a_[i] -= o.a_[i];
    return r;
}

RationalMatrix RationalMatrix::operator*(const Rational &c) const {
    RationalMatrix r = *this;
    for (auto &x : r.a_)
        x *= c;
    return r;
}

RatVec RationalMatrix::operator*(const RatVec &v) const {
    require(v.size() == cols_, ErrorCode::ShapeMismatch, "matrix-vector shape");
    RatVec r(rows_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j)
            r[i] += at(i, j) * v[j];
    return r;
}

bool RationalMatrix::operator==(const RationalMatrix &o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

RationalMatrix RationalMatrix::transpose() const {
    RationalMatrix r(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j)
            r.at(j, i) = at(i, j);
    return r;
}

Rational RationalMatrix::trace() const {
    Rational t = 0;
    for (size_t i = 0; i < std::min(rows_, cols_); ++i)
        t += at(i, i);
    return t;
}

bool RationalMatrix::is_zero() const {
    for (auto &x : a_)
        if (x != 0)
            return false;
    return true;
}

std::string RationalMatrix::to_json() const {
    nlohmann::ordered_json j;
    j["rows"] = rows_;
    j["cols"] = cols_;
    auto rows = nlohmann::ordered_json::array();
    for (size_t i = 0; i < rows_; ++i) {
        auto row = nlohmann::ordered_json::array();
        for (size_t k = 0; k < cols_; ++k)
            row.push_back(ominv::to_string(at(i, k)));
        rows.push_back(row);
    }
    j["entries"] = rows;
    return j.dump();
}

static Rational json_rational(const nlohmann::json &v) {
    if (v.is_string())
        return parse_rational(v.get<std::string>());
    if (v.is_number_integer())
        return Rational(v.get<long>());
    fail(ErrorCode::ParseError, "rational must be a string \"p/q\" or an integer");
}

RationalMatrix RationalMatrix::from_json(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception &e) {
        fail(ErrorCode::ParseError, e.what());
    }
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
        fail(ErrorCode::ParseError, "matrix needs rows, cols and entries");
    size_t r = j["rows"].get<size_t>(), c = j["cols"].get<size_t>();
    const auto &e = j["entries"];
    if (!e.is_array() || e.size() != r)
        fail(ErrorCode::ShapeMismatch, "matrix row count does not match rows");
    std::vector<Rational> a;
    for (const auto &row : e) {
        if (!row.is_array() || row.size() != c)
            fail(ErrorCode::ShapeMismatch, "matrix column count does not match cols");
        for (const auto &v : row)
            a.push_back(json_rational(v));
    }
    return RationalMatrix(r, c, std::move(a));
}

QPoly char_poly(const RationalMatrix &A) {
    require(A.square(), ErrorCode::NotSquare, "characteristic polynomial of a non-square matrix");
    size_t n = A.rows();
    // Faddeev-LeVerrier
    std::vector<Rational> c(n + 1);
    c[n] = 1;
    RationalMatrix M(n, n), I = RationalMatrix::identity(n);
    for (size_t k = 1; k <= n; ++k) {
        M = A * M + I * c[n - k + 1];
        c[n - k] = -(A * M).trace() / static_cast<long>(k);
    }
    return QPoly(c);
}

NFMatrix nf_matrix(const FieldPtr &K, const RationalMatrix &A) {
    NFMatrix m(A.rows());
    for (size_t i = 0; i < A.rows(); ++i)
        for (size_t j = 0; j < A.cols(); ++j)
            m[i].emplace_back(K, A.at(i, j));
    return m;
}

NFMatrix nf_zero(const FieldPtr &K, size_t r, size_t c) {
    return NFMatrix(r, std::vector<NFElem>(c, NFElem(K, Rational(0))));
}

NFMatrix nf_mul(const NFMatrix &a, const NFMatrix &b) {
    size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), k = b.size();
    require(a.empty() || a[0].size() == k, ErrorCode::ShapeMismatch, "field matrix product shape");
    FieldPtr K = !a.empty() && k ? a[0][0].field() : nullptr;
    NFMatrix r = nf_zero(K, n, m);
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < k; ++t) {
            if (a[i][t].is_zero())
                continue;
            for (size_t j = 0; j < m; ++j)
                if (!b[t][j].is_zero())
                    r[i][j] += a[i][t] * b[t][j];
        }
    return r;
}

std::vector<NFElem> nf_mul(const NFMatrix &a, const std::vector<NFElem> &v) {
    std::vector<NFElem> r;
    for (const auto &row : a) {
        require(row.size() == v.size(), ErrorCode::ShapeMismatch, "field matrix-vector shape");
        NFElem acc(v.empty() ? nullptr : v[0].field(), Rational(0));
        for (size_t j = 0; j < v.size(); ++j)
            if (!row[j].is_zero() && !v[j].is_zero())
                acc += row[j] * v[j];
        r.push_back(acc);
    }
    return r;
}

NFMatrix nf_transpose(const NFMatrix &a) {
    if (a.empty())
        return a;
    NFMatrix r(a[0].size());
    for (size_t j = 0; j < a[0].size(); ++j)
        for (size_t i = 0; i < a.size(); ++i)
            r[j].push_back(a[i][j]);
    return r;
}

std::vector<size_t> nf_rref(NFMatrix &a) {
    std::vector<size_t> pivots;
    if (a.empty())
        return pivots;
    size_t rows = a.size(), cols = a[0].size(), r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && a[p][c].is_zero())
            ++p;
        if (p == rows)
            continue;
        std::swap(a[p], a[r]);
        NFElem inv = a[r][c].inverse();
        for (size_t j = c; j < cols; ++j)
            a[r][j] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c].is_zero())
                continue;
            NFElem f = a[i][c];
            for (size_t j = c; j < cols; ++j)
                if (!a[r][j].is_zero())
                    a[i][j] -= f * a[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

size_t nf_rank(NFMatrix a) { return nf_rref(a).size(); }

std::vector<std::vector<NFElem>> nf_kernel(const NFMatrix &m) {
    NFMatrix a = m;
    auto piv = nf_rref(a);
    size_t cols = m.empty() ? 0 : m[0].size();
    FieldPtr K = cols ? m[0][0].field() : nullptr;
    std::vector<bool> is_piv(cols, false);
    for (size_t c : piv)
        is_piv[c] = true;
    std::vector<std::vector<NFElem>> basis;
    for (size_t f = 0; f < cols; ++f) {
        if (is_piv[f])
            continue;
        std::vector<NFElem> v(cols, NFElem(K, Rational(0)));
        v[f] = NFElem(K, Rational(1));
        for (size_t r = 0; r < piv.size(); ++r)
            v[piv[r]] = -a[r][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

NFMatrix nf_inverse(const NFMatrix &m) {
    size_t n = m.size();
    require(n == 0 || m[0].size() == n, ErrorCode::NotSquare, "inverse of a non-square field matrix");
    if (n == 0)
        return m;
    FieldPtr K = m[0][0].field();
    NFMatrix a = m;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            a[i].push_back(NFElem(K, Rational(i == j ? 1 : 0)));
    auto piv = nf_rref(a);
    if (piv.size() < n || piv[n - 1] != n - 1)
        fail(ErrorCode::DivisionByZero, "singular field matrix");
    NFMatrix r(n);
    for (size_t i = 0; i < n; ++i)
        r[i].assign(a[i].begin() + n, a[i].end());
    return r;
}

} // namespace ominv
