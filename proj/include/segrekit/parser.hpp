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

#ifndef SEGREKIT_PARSER_HPP
#define SEGREKIT_PARSER_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "segrekit/linalg.hpp"
#include "segrekit/series.hpp"

// Manifold and map spec files.
//
// A manifold spec describes real defining functions rho_j(Z, conj Z) of a
// germ (M, p) in C^N; complexify() turns it into a DefiningSystem over the
// blocks Z and zeta (zeta standing in for conj Z) with p moved to 0.

namespace segrekit
{

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Number, Z, Zeta, Neg, Add, Sub, Mul, Div, Pow, Conj, Re, Im, Abs2, RandQ };

    Kind kind = Kind::Number;
    GaussianRational value;        // Number
    std::size_t index = 0;         // Z, Zeta: 0-based
    unsigned exponent = 0;         // Pow
    std::vector<ExprPtr> args;
    // RandQ: tag, degree range, optional variable subset (0-based Z indices)
    std::string tag;
    unsigned min_degree = 0;
    unsigned max_degree = 0;
    std::vector<std::size_t> vars;
    int line = 0;
    int column = 0;

    bool is_constant() const;
    /// Largest Z/zeta index used plus one (0 for constants).
    std::size_t arity() const;
    std::string to_string() const;
};

struct ManifoldSpec {
    std::string name;
    std::size_t N = 0;
    std::size_t d = 0;
    std::vector<ExprPtr> exprs;
    Vector basepoint; // N coordinates
    std::optional<int> order;
};

struct MapSpec {
    std::string name;
    std::size_t N = 0; // source dimension
    std::vector<ExprPtr> exprs; // one per target coordinate
    std::optional<int> order;
};

ManifoldSpec parse_manifold(std::string_view text);
MapSpec parse_map(std::string_view text);

/// Reads a file; a missing name= header defaults to the file stem.
ManifoldSpec load_manifold(const std::filesystem::path &path);
MapSpec load_map(const std::filesystem::path &path);

/// Default truncation order for codimension d.
int default_order(std::size_t d);

struct DefiningSystem {
    std::string name;
    std::size_t N = 0;
    std::size_t d = 0;
    ContextPtr ctx;     // blocks Z (N), zeta (N)
    SeriesVector rho;   // d series, each vanishing at 0, normalized
    Matrix reality;     // U with conjswap(rho) = U rho
    std::size_t gradient_rank = 0;
    Vector scale;       // rho_j = scale_j * (complexified input)_j

    std::size_t n() const { return N - d; }
    int order() const { return rho.order(); }
};

struct ComplexifyOptions {
    std::optional<int> order; // falls back to the spec, then default_order(d)
    bool require_generic = true;
};

DefiningSystem complexify(const ManifoldSpec &spec, const ComplexifyOptions &opts = {});

/// Validates and normalizes an already complexified system (blocks Z, zeta).
DefiningSystem make_system(std::string name, const SeriesVector &rho, bool require_generic = true);

/// conj_coeffs followed by exchanging the Z and zeta blocks.
TruncatedSeries conj_swap(const TruncatedSeries &s);
SeriesVector conj_swap(const SeriesVector &v);

/// d x N matrix rho_{j,Z}(0).
Matrix gradient_at_zero(const DefiningSystem &sys);
/// d x N matrix of series d rho_j / d Z_k.
SeriesMatrix gradient_series(const DefiningSystem &sys);

struct CRNumber {
    enum class Verdict { Generic, CRCertified, NotCRAtZero };
    std::size_t rank_at_zero = 0;
    std::size_t generic_rank = 0;
    std::size_t r_at_zero = 0; // d - rank_at_zero
    Verdict verdict = Verdict::Generic;
};

CRNumber cr_number(const DefiningSystem &sys);
std::string to_string(CRNumber::Verdict v);

/// rho'(Z, zeta) = rho(A Z, conj(A) zeta) for invertible A, re-normalized.
DefiningSystem change_coordinates(const DefiningSystem &sys, const Matrix &A);

/// Evaluates an expression holomorphic in Z over a context with a block
/// named "Z" of arity >= expr.arity(). randq draws from the given seed.
TruncatedSeries evaluate_holomorphic(const Expr &e, const ContextPtr &ctx, int order, std::uint64_t seed);

/// Canonical text of a system (header plus one rho component per line).
std::string to_string(const DefiningSystem &sys);

} // namespace segrekit

#endif
