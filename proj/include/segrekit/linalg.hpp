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

#ifndef SEGREKIT_LINALG_HPP
#define SEGREKIT_LINALG_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "segrekit/gaussian_rational.hpp"
#include "segrekit/series.hpp"

// Exact dense linear algebra over the Gaussian rationals, plus determinants
// of small matrices with series entries.

namespace segrekit
{

using Vector = std::vector<GaussianRational>;

class Matrix
{
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    static Matrix from_rows(const std::vector<Vector> &rows, std::size_t cols);
    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    GaussianRational &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const GaussianRational &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Vector row(std::size_t r) const;
    Matrix transpose() const;
    Matrix conj() const;

    friend Matrix operator*(const Matrix &a, const Matrix &b);
    friend Vector operator*(const Matrix &a, const Vector &v);
    friend bool operator==(const Matrix &, const Matrix &) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<GaussianRational> data_;
};

struct Echelon {
    Matrix reduced;                  // reduced row echelon form
    std::vector<std::size_t> pivots; // pivot column of each nonzero row
};

Echelon rref(Matrix m);
std::size_t rank(const Matrix &m);
/// Basis of {x : m x = 0}, one vector per free column.
std::vector<Vector> kernel(const Matrix &m);
/// Some solution of m x = b, or nullopt when inconsistent.
std::optional<Vector> solve(const Matrix &m, const Vector &b);
GaussianRational determinant(Matrix m);

using SparseRow = std::map<std::size_t, GaussianRational>;
/// Rank of a list of sparse rows (zero entries must not be stored).
std::size_t sparse_rank(std::vector<SparseRow> rows);
/// Throws std::domain_error when singular.
Matrix inverse(const Matrix &m);

using SeriesMatrix = std::vector<std::vector<TruncatedSeries>>;

/// Determinant of a square series matrix (cofactor expansion over column
/// subsets, memoized). The matrix must be non-empty.
TruncatedSeries determinant(const SeriesMatrix &m);
/// adj(m) with adj(m) * m = det(m) * I.
SeriesMatrix adjugate(const SeriesMatrix &m);
/// A nonvanishing minor: its row/column sets and lowest nonzero term.
struct MinorWitness {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    Monomial monomial;
    GaussianRational coefficient;
};

struct GenericRank {
    std::size_t rank = 0;
    std::optional<MinorWitness> witness; // empty when rank == 0
};

/// Largest s such that some s x s minor is nonzero through the tracked
/// order. Sizes are searched smallest first; within a size, column subsets
/// follow col_order (default: natural order) and the first nonzero minor is
/// the witness.
GenericRank series_generic_rank(const SeriesMatrix &m, const std::vector<std::size_t> &col_order = {});

/// Determinant of the submatrix on the given rows and columns.
TruncatedSeries minor(const SeriesMatrix &m, const std::vector<std::size_t> &rows,
                      const std::vector<std::size_t> &cols);

/// Constant terms of every entry.
Matrix value_at_zero(const SeriesMatrix &m);

} // namespace segrekit

#endif
