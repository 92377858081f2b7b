// Copyright 2026 The segre-kit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "segrekit/linalg.hpp"

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

namespace segrekit
{

Matrix Matrix::from_rows(const std::vector<Vector> &rows, std::size_t cols)
{
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) {
            throw std::invalid_argument("Matrix::from_rows: ragged rows");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(r, c) = rows[r][c];
        }
    }
    return m;
}

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        m(k, k) = 1;
    }
    return m;
}

Vector Matrix::row(std::size_t r) const
{
    return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
}

Matrix Matrix::transpose() const
{
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            t(c, r) = (*this)(r, c);
        }
    }
    return t;
}

Matrix Matrix::conj() const
{
    Matrix m(*this);
    for (auto &x : m.data_) {
        x = x.conj();
    }
    return m;
}

Matrix operator*(const Matrix &a, const Matrix &b)
{
    if (a.cols_ != b.rows_) {
        throw std::invalid_argument("Matrix product: shape mismatch");
    }
    Matrix p(a.rows_, b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r) {
        for (std::size_t k = 0; k < a.cols_; ++k) {
            if (a(r, k).is_zero()) {
                continue;
            }
            for (std::size_t c = 0; c < b.cols_; ++c) {
                p(r, c) += a(r, k) * b(k, c);
            }
        }
    }
    return p;
}

Vector operator*(const Matrix &a, const Vector &v)
{
    if (a.cols_ != v.size()) {
        throw std::invalid_argument("Matrix-vector product: shape mismatch");
    }
    Vector out(a.rows_);
    for (std::size_t r = 0; r < a.rows_; ++r) {
        for (std::size_t c = 0; c < a.cols_; ++c) {
            out[r] += a(r, c) * v[c];
        }
    }
    return out;
}

Echelon rref(Matrix m)
{
    Echelon e;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t piv = row;
        while (piv < m.rows() && m(piv, col).is_zero()) {
            ++piv;
        }
        if (piv == m.rows()) {
            continue;
        }
        if (piv != row) {
            for (std::size_t c = 0; c < m.cols(); ++c) {
                std::swap(m(piv, c), m(row, c));
            }
        }
        const GaussianRational p = m(row, col);
        for (std::size_t c = col; c < m.cols(); ++c) {
            m(row, c) /= p;
        }
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, col).is_zero()) {
                continue;
            }
            const GaussianRational f = m(r, col);
            for (std::size_t c = col; c < m.cols(); ++c) {
                m(r, c) -= f * m(row, c);
            }
        }
        e.pivots.push_back(col);
        ++row;
    }
    e.reduced = std::move(m);
    return e;
}

std::size_t rank(const Matrix &m)
{
    return rref(m).pivots.size();
}

std::vector<Vector> kernel(const Matrix &m)
{
    const Echelon e = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : e.pivots) {
        is_pivot[p] = true;
    }
    std::vector<Vector> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) {
            continue;
        }
        Vector v(m.cols());
        v[f] = 1;
        for (std::size_t r = 0; r < e.pivots.size(); ++r) {
            v[e.pivots[r]] = -e.reduced(r, f);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<Vector> solve(const Matrix &m, const Vector &b)
{
    if (b.size() != m.rows()) {
        throw std::invalid_argument("solve: shape mismatch");
    }
    Matrix aug(m.rows(), m.cols() + 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            aug(r, c) = m(r, c);
        }
        aug(r, m.cols()) = b[r];
    }
    const Echelon e = rref(aug);
    if (!e.pivots.empty() && e.pivots.back() == m.cols()) {
        return std::nullopt;
    }
    Vector x(m.cols());
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
        x[e.pivots[r]] = e.reduced(r, m.cols());
    }
    return x;
}

GaussianRational determinant(Matrix m)
{
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("determinant: matrix not square");
    }
    GaussianRational det = 1;
    const std::size_t n = m.rows();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m(piv, col).is_zero()) {
            ++piv;
        }
        if (piv == n) {
            return 0;
        }
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(m(piv, c), m(col, c));
            }
            det = -det;
        }
        det *= m(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            if (m(r, col).is_zero()) {
                continue;
            }
            const GaussianRational f = m(r, col) / m(col, col);
            for (std::size_t c = col; c < n; ++c) {
                m(r, c) -= f * m(col, c);
            }
        }
    }
    return det;
}

std::size_t sparse_rank(std::vector<SparseRow> rows)
{
    // Incremental elimination keyed by each kept row's leading column.
    std::map<std::size_t, SparseRow> basis;
    for (auto &v : rows) {
        while (!v.empty()) {
            const auto lead = v.begin()->first;
            auto it = basis.find(lead);
            if (it == basis.end()) {
                const GaussianRational inv = GaussianRational(1) / v.begin()->second;
                for (auto &[c, x] : v) {
                    x *= inv;
                }
                basis.emplace(lead, std::move(v));
                break;
            }
            const GaussianRational f = v.begin()->second;
            for (const auto &[c, x] : it->second) {
                auto [pos, inserted] = v.try_emplace(c);
                pos->second -= f * x;
                if (pos->second.is_zero()) {
                    v.erase(pos);
                }
            }
        }
    }
    return basis.size();
}

Matrix inverse(const Matrix &m)
{
    const std::size_t n = m.rows();
    if (n != m.cols()) {
        throw std::invalid_argument("inverse: matrix not square");
    }
    Matrix aug(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            aug(r, c) = m(r, c);
        }
        aug(r, n + r) = 1;
    }
    const Echelon e = rref(aug);
    if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) {
        throw std::domain_error("inverse: matrix is singular");
    }
    Matrix inv(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            inv(r, c) = e.reduced(r, n + c);
        }
    }
    return inv;
}

namespace
{

// Determinant of the rows [row, n) restricted to the columns in mask.
TruncatedSeries det_rec(const SeriesMatrix &m, std::size_t row, std::uint64_t mask,
                        std::unordered_map<std::uint64_t, TruncatedSeries> &memo)
{
    if (row == m.size()) {
        return TruncatedSeries::constant(m[0][0].context(), m[0][0].order(), 1);
    }
    if (auto it = memo.find(mask); it != memo.end()) {
        return it->second;
    }
    TruncatedSeries acc(m[0][0].context(), m[0][0].order());
    int sign = 1;
    for (std::size_t c = 0; c < m.size(); ++c) {
        if (!(mask & (std::uint64_t{1} << c))) {
            continue;
        }
        if (!m[row][c].is_zero()) {
            const TruncatedSeries term = m[row][c] * det_rec(m, row + 1, mask & ~(std::uint64_t{1} << c), memo);
            if (sign > 0) {
                acc += term;
            } else {
                acc -= term;
            }
        } else {
            acc = truncate(acc, std::min(acc.order(), m[row][c].order()));
        }
        sign = -sign;
    }
    memo.emplace(mask, acc);
    return acc;
}

} // namespace

TruncatedSeries determinant(const SeriesMatrix &m)
{
    const std::size_t n = m.size();
    if (n == 0 || n > 63) {
        throw std::invalid_argument("determinant: unsupported series matrix size");
    }
    for (const auto &row : m) {
        if (row.size() != n) {
            throw std::invalid_argument("determinant: matrix not square");
        }
    }
    std::unordered_map<std::uint64_t, TruncatedSeries> memo;
    return det_rec(m, 0, (std::uint64_t{1} << n) - 1, memo);
}

SeriesMatrix adjugate(const SeriesMatrix &m)
{
    const std::size_t n = m.size();
    if (n == 0) {
        throw std::invalid_argument("adjugate: empty matrix");
    }
    const auto &ctx = m[0][0].context();
    int order = m[0][0].order();
    for (const auto &row : m) {
        for (const auto &x : row) {
            order = std::min(order, x.order());
        }
    }
    SeriesMatrix adj(n, std::vector<TruncatedSeries>(n, TruncatedSeries(ctx, order)));
    if (n == 1) {
        adj[0][0] = TruncatedSeries::constant(ctx, order, 1);
        return adj;
    }
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            SeriesMatrix minor;
            for (std::size_t i = 0; i < n; ++i) {
                if (i == r) {
                    continue;
                }
                std::vector<TruncatedSeries> row;
                for (std::size_t j = 0; j < n; ++j) {
                    if (j != c) {
                        row.push_back(m[i][j]);
                    }
                }
                minor.push_back(std::move(row));
            }
            TruncatedSeries cof = truncate(determinant(minor), order);
            // adj = transpose of the cofactor matrix
            adj[c][r] = ((r + c) % 2 == 0) ? cof : -cof;
        }
    }
    return adj;
}

Matrix value_at_zero(const SeriesMatrix &m)
{
    Matrix v(m.size(), m.empty() ? 0 : m[0].size());
    for (std::size_t r = 0; r < m.size(); ++r) {
        for (std::size_t c = 0; c < m[r].size(); ++c) {
            v(r, c) = m[r][c].order() >= 0 ? m[r][c].constant_term() : GaussianRational();
        }
    }
    return v;
}

TruncatedSeries minor(const SeriesMatrix &m, const std::vector<std::size_t> &rows,
                      const std::vector<std::size_t> &cols)
{
    SeriesMatrix sub;
    for (auto r : rows) {
        std::vector<TruncatedSeries> row;
        for (auto c : cols) {
            row.push_back(m.at(r).at(c));
        }
        sub.push_back(std::move(row));
    }
    return determinant(sub);
}

namespace
{

// Advances a strictly increasing index combination in [0, n); false at end.
bool next_combination(std::vector<std::size_t> &comb, std::size_t n)
{
    const std::size_t k = comb.size();
    for (std::size_t i = k; i-- > 0;) {
        if (comb[i] < n - k + i) {
            ++comb[i];
            for (std::size_t j = i + 1; j < k; ++j) {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    return false;
}

std::vector<std::size_t> first_combination(std::size_t k)
{
    std::vector<std::size_t> c(k);
    for (std::size_t i = 0; i < k; ++i) {
        c[i] = i;
    }
    return c;
}

} // namespace

GenericRank series_generic_rank(const SeriesMatrix &m, const std::vector<std::size_t> &col_order)
{
    GenericRank result;
    const std::size_t nr = m.size();
    const std::size_t nc = nr == 0 ? 0 : m[0].size();
    std::vector<std::size_t> order = col_order;
    if (order.empty()) {
        order = first_combination(nc);
    }
    if (order.size() != nc) {
        throw std::invalid_argument("series_generic_rank: column order has wrong length");
    }
    for (std::size_t s = 1; s <= std::min(nr, nc); ++s) {
        bool found = false;
        std::vector<std::size_t> cpos = first_combination(s);
        do {
            std::vector<std::size_t> cols;
            for (auto p : cpos) {
                cols.push_back(order[p]);
            }
            std::vector<std::size_t> rows = first_combination(s);
            do {
                const TruncatedSeries det = minor(m, rows, cols);
                if (auto low = det.lowest_term()) {
                    result.rank = s;
                    result.witness = MinorWitness{rows, cols, low->first, low->second};
                    found = true;
                }
            } while (!found && next_combination(rows, nr));
        } while (!found && next_combination(cpos, nc));
        if (!found) {
            break;
        }
    }
    return result;
}

} // namespace segrekit
