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

#ifndef SEGREKIT_NONDEGENERACY_HPP
#define SEGREKIT_NONDEGENERACY_HPP

#include <optional>
#include <string>
#include <vector>

#include "segrekit/linalg.hpp"
#include "segrekit/parser.hpp"
#include "segrekit/segre.hpp"

// CR vector fields on the complexified manifold and the nondegeneracy and
// finite type tests built from them.

namespace segrekit
{

/// Formal vector field on the (Z, zeta) space: components[k] is the
/// coefficient of d/dZ_{k+1} for k < N and of d/dzeta_{k-N+1} otherwise.
class VectorField
{
  public:
    VectorField(ContextPtr ctx, std::vector<TruncatedSeries> components);

    const ContextPtr &context() const { return ctx_; }
    std::size_t size() const { return comps_.size(); }
    const TruncatedSeries &operator[](std::size_t k) const { return comps_[k]; }
    const std::vector<TruncatedSeries> &components() const { return comps_; }
    int order() const;

    /// X(f) = sum_k X_k df/dx_k.
    TruncatedSeries apply(const TruncatedSeries &f) const;
    /// Constant terms (all zero components are reported as zero).
    Vector value_at_zero() const;
    bool is_zero() const;

    friend VectorField bracket(const VectorField &X, const VectorField &Y);
    friend bool operator==(const VectorField &, const VectorField &) = default;

  private:
    ContextPtr ctx_;
    std::vector<TruncatedSeries> comps_;
};

VectorField bracket(const VectorField &X, const VectorField &Y);
/// Conjugate field: coefficients conj-swapped, Z and zeta directions exchanged.
VectorField conj_field(const VectorField &X);

struct CRFieldBasis {
    IndexSet solved;
    IndexSet unsolved;
    std::vector<VectorField> fields; // L_i = d/dzeta_{u_i} + sum_s c_is d/dzeta_s
    std::vector<VectorField> conjugates;
};

CRFieldBasis cr_field_basis(const DefiningSystem &sys);

struct KNondegeneracy {
    std::optional<std::size_t> k;      // smallest k with full span at 0
    std::size_t k_max = 0;
    std::size_t k_reached = 0;         // deepest level actually evaluated
    std::vector<std::size_t> rank_at_zero; // after levels 0..k_reached
    bool truncation_exhausted = false;
    bool levi_nondegenerate() const { return k && *k <= 1; }
};

KNondegeneracy k_nondegeneracy(const DefiningSystem &sys, std::size_t k_max);

struct HolomorphicNondegeneracy {
    bool nondegenerate = false;
    std::optional<std::size_t> k; // level at which generic rank reached N
    std::size_t k_max = 0;
    std::size_t generic_rank = 0;
    int order = 0;
    bool truncation_exhausted = false;
};

HolomorphicNondegeneracy holomorphic_nondegeneracy(const DefiningSystem &sys, std::size_t k_max);

struct FiniteTypeLie {
    bool finite_type = false;
    std::optional<std::size_t> depth; // bracket length at which the span filled up
    std::size_t depth_max = 0;
    std::size_t target_dimension = 0; // 2N - d
    std::vector<std::size_t> span_by_depth;
    bool truncation_exhausted = false;
    std::string note;
};

FiniteTypeLie finite_type_lie(const DefiningSystem &sys, std::size_t depth_max);

std::size_t default_depth_max(std::size_t N);
std::size_t default_k_max(std::size_t N);

} // namespace segrekit

#endif
