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

#ifndef SEGREKIT_SEGRE_HPP
#define SEGREKIT_SEGRE_HPP

#include <optional>
#include <string>
#include <vector>

#include "segrekit/linalg.hpp"
#include "segrekit/parser.hpp"

// Segre variety mappings gamma(zeta, t) and the iterated Segre mappings
//
//   v^1(t^1) = gamma(0, t^1),  v^{j+1}(t^1..t^{j+1}) = gamma(conj v^j, t^{j+1}),
//
// whose generic ranks decide finite type: M is of finite type at 0 exactly
// when Rk v^{d+1} = N.

namespace segrekit
{

using IndexSet = std::vector<std::size_t>;

struct SegreMapping {
    std::size_t N = 0;
    std::size_t n = 0;
    ContextPtr ctx;     // blocks zeta (N), t (n)
    SeriesVector gamma; // N series
    IndexSet solved;    // 0-based Z indices given implicitly, ascending
};

/// rho(Z, zeta) with both argument lists given as series in one context.
SeriesVector substitute(const DefiningSystem &sys, const SeriesVector &Z, const SeriesVector &zeta);

/// d-subsets S whose minor of rho_Z(0) is invertible, preferred frame first
/// (subsets in descending lexicographic order, so larger indices win).
std::vector<IndexSet> admissible_frames(const DefiningSystem &sys);

/// Solves rho(gamma(zeta, t), zeta) = 0 through the system's order by a
/// chord iteration against the constant d x d minor on `solved`.
SegreMapping solve_gamma(const DefiningSystem &sys, const std::optional<IndexSet> &solved = std::nullopt);

struct IteratedSegre {
    std::size_t j = 0;
    ContextPtr ctx; // blocks t1, ..., tj (n each)
    SeriesVector v;
};

/// Context with blocks t1..tj of arity n.
ContextPtr segre_context(std::size_t j, std::size_t n);

IteratedSegre iterate_segre(const SegreMapping &gamma, std::size_t j);
/// v^1, ..., v^jmax.
std::vector<IteratedSegre> iterate_segre_chain(const SegreMapping &gamma, std::size_t jmax);

/// rho(v^{k+1}, conj v^k); identically zero through the tracked order.
SeriesVector check_idv(const DefiningSystem &sys, const SegreMapping &gamma, std::size_t k);
SeriesVector check_idv(const DefiningSystem &sys, const IteratedSegre &vk, const IteratedSegre &vk1);

struct RankCertificate {
    std::size_t certified_rank = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::string> column_vars; // indeterminate of each Jacobian column
    std::optional<MinorWitness> witness;  // columns index into column_vars
    int truncation_order = -1;
    bool conclusive = false;

    /// Recomputes the witness minor of F and checks the stated coefficient.
    bool verify(const SeriesVector &F) const;
    std::string describe(const SeriesContext &ctx) const;
};

/// Jacobian of F with respect to the variables of the named blocks; columns
/// are searched newest block first.
SeriesMatrix jacobian(const SeriesVector &F, const std::vector<std::string> &blocks);
RankCertificate generic_rank(const SeriesVector &F, const std::vector<std::string> &blocks);
/// Rank certificate of v^j with respect to all of its t-blocks.
RankCertificate generic_rank(const IteratedSegre &vj);

struct FiniteTypeSegre {
    bool finite_type = false;
    int order = 0;
    std::vector<RankCertificate> chain; // Rk v^1 .. Rk v^{d+1}
    IndexSet solved;
};

FiniteTypeSegre finite_type_segre(const DefiningSystem &sys, const std::optional<IndexSet> &solved = std::nullopt);

struct GammaIndependence {
    std::vector<IndexSet> frames;
    std::vector<std::vector<std::size_t>> ranks; // per frame: Rk v^1 .. Rk v^{d+1}
    bool consistent = true;
    bool degenerate = false; // fewer than two admissible frames
};

GammaIndependence gamma_independence_check(const DefiningSystem &sys);

std::string to_string(const IndexSet &s);

} // namespace segrekit

#endif
