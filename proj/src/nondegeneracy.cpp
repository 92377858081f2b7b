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

#include "segrekit/nondegeneracy.hpp"

#include <algorithm>
#include <limits>

#include "segrekit/errors.hpp"

namespace segrekit
{

// ---------------------------------------------------------------------------
// VectorField

VectorField::VectorField(ContextPtr ctx, std::vector<TruncatedSeries> components)
    : ctx_(std::move(ctx)), comps_(std::move(components))
{
    if (comps_.size() != ctx_->size()) {
        throw ContextMismatch("VectorField: need one component per indeterminate");
    }
    int order = std::numeric_limits<int>::max();
    for (const auto &c : comps_) {
        if (!same_context(c.context(), ctx_)) {
            throw ContextMismatch("VectorField: component in a foreign context");
        }
        order = std::min(order, c.order());
    }
    for (auto &c : comps_) {
        c = truncate(c, order);
    }
}

int VectorField::order() const
{
    return comps_.empty() ? std::numeric_limits<int>::max() : comps_.front().order();
}

TruncatedSeries VectorField::apply(const TruncatedSeries &f) const
{
    TruncatedSeries out(ctx_, std::min(order(), f.order() - 1));
    for (std::size_t k = 0; k < comps_.size(); ++k) {
        if (comps_[k].is_zero()) {
            continue;
        }
        out += comps_[k] * differentiate(f, k);
    }
    return out;
}

Vector VectorField::value_at_zero() const
{
    if (order() < 0) {
        throw TruncationError("vector field value at 0 is beyond the tracked order");
    }
    Vector v;
    for (const auto &c : comps_) {
        v.push_back(c.constant_term());
    }
    return v;
}

bool VectorField::is_zero() const
{
    return std::all_of(comps_.begin(), comps_.end(), [](const TruncatedSeries &c) { return c.is_zero(); });
}

VectorField bracket(const VectorField &X, const VectorField &Y)
{
    if (!same_context(X.ctx_, Y.ctx_)) {
        throw ContextMismatch("bracket: fields live in different contexts");
    }
    std::vector<TruncatedSeries> out;
    for (std::size_t k = 0; k < X.size(); ++k) {
        out.push_back(X.apply(Y[k]) - Y.apply(X[k]));
    }
    return VectorField(X.ctx_, std::move(out));
}

VectorField conj_field(const VectorField &X)
{
    const std::size_t N = X.size() / 2;
    std::vector<TruncatedSeries> out;
    for (std::size_t k = 0; k < X.size(); ++k) {
        out.push_back(conj_swap(X[k < N ? k + N : k - N]));
    }
    return VectorField(X.context(), std::move(out));
}

// ---------------------------------------------------------------------------
// CR fields

CRFieldBasis cr_field_basis(const DefiningSystem &sys)
{
    CRFieldBasis basis;
    const auto frames = admissible_frames(sys);
    if (frames.empty()) {
        throw ValidationError("cr_field_basis: system is not generic at 0");
    }
    basis.solved = frames.front();
    for (std::size_t k = 0; k < sys.N; ++k) {
        if (std::find(basis.solved.begin(), basis.solved.end(), k) == basis.solved.end()) {
            basis.unsolved.push_back(k);
        }
    }
    const std::size_t N = sys.N;
    const int order = sys.order() - 1;

    SeriesMatrix B;
    for (std::size_t j = 0; j < sys.d; ++j) {
        std::vector<TruncatedSeries> row;
        for (auto s : basis.solved) {
            row.push_back(differentiate(sys.rho[j], N + s));
        }
        B.push_back(std::move(row));
    }
    const TruncatedSeries det = determinant(B);
    if (det.constant_term().is_zero()) {
        throw InternalError("cr_field_basis: zeta-block singular at 0 for a validated system");
    }
    const SeriesMatrix adj = adjugate(B);

    for (auto u : basis.unsolved) {
        std::vector<TruncatedSeries> comps(2 * N, TruncatedSeries(sys.ctx, order));
        comps[N + u] = TruncatedSeries::constant(sys.ctx, order, 1);
        for (std::size_t a = 0; a < sys.d; ++a) {
            TruncatedSeries num(sys.ctx, order);
            for (std::size_t j = 0; j < sys.d; ++j) {
                num += adj[a][j] * differentiate(sys.rho[j], N + u);
            }
            comps[N + basis.solved[a]] = -divide_by_unit(num, det);
        }
        VectorField L(sys.ctx, std::move(comps));
        for (std::size_t j = 0; j < sys.d; ++j) {
            if (!L.apply(sys.rho[j]).is_zero()) {
                throw InternalError("cr_field_basis: tangency failed for rho_" + std::to_string(j + 1));
            }
        }
        basis.conjugates.push_back(conj_field(L));
        basis.fields.push_back(std::move(L));
    }
    return basis;
}

// ---------------------------------------------------------------------------
// k-nondegeneracy and holomorphic nondegeneracy

namespace
{

struct Row {
    std::vector<TruncatedSeries> entries; // N series
    std::size_t last_field = 0;            // multi-indices kept non-decreasing
};

int row_order(const Row &r)
{
    int o = std::numeric_limits<int>::max();
    for (const auto &e : r.entries) {
        o = std::min(o, e.order());
    }
    return o;
}

std::vector<Row> gradient_rows(const DefiningSystem &sys)
{
    std::vector<Row> rows;
    for (const auto &g : gradient_series(sys)) {
        rows.push_back({g, 0});
    }
    return rows;
}

std::vector<Row> next_level(const std::vector<Row> &level, const CRFieldBasis &basis)
{
    std::vector<Row> out;
    for (const Row &r : level) {
        for (std::size_t i = r.last_field; i < basis.fields.size(); ++i) {
            Row nr;
            nr.last_field = i;
            for (const auto &e : r.entries) {
                nr.entries.push_back(basis.fields[i].apply(e));
            }
            out.push_back(std::move(nr));
        }
    }
    return out;
}

} // namespace

KNondegeneracy k_nondegeneracy(const DefiningSystem &sys, std::size_t k_max)
{
    KNondegeneracy res;
    res.k_max = k_max;
    const CRFieldBasis basis = cr_field_basis(sys);
    std::vector<Vector> values;
    std::vector<Row> level = gradient_rows(sys);
    for (std::size_t k = 0; k <= k_max; ++k) {
        if (k > 0) {
            level = next_level(level, basis);
        }
        bool exhausted = false;
        for (const Row &r : level) {
            if (row_order(r) < 0) {
                exhausted = true;
                break;
            }
            Vector v;
            for (const auto &e : r.entries) {
                v.push_back(e.constant_term());
            }
            values.push_back(std::move(v));
        }
        if (exhausted) {
            res.truncation_exhausted = true;
            break;
        }
        res.k_reached = k;
        const std::size_t rk = rank(Matrix::from_rows(values, sys.N));
        res.rank_at_zero.push_back(rk);
        if (rk == sys.N) {
            res.k = k;
            break;
        }
        if (level.empty()) {
            break;
        }
    }
    return res;
}

HolomorphicNondegeneracy holomorphic_nondegeneracy(const DefiningSystem &sys, std::size_t k_max)
{
    HolomorphicNondegeneracy res;
    res.k_max = k_max;
    res.order = sys.order();
    const CRFieldBasis basis = cr_field_basis(sys);
    SeriesMatrix independent;
    std::vector<Row> level = gradient_rows(sys);
    for (std::size_t k = 0; k <= k_max; ++k) {
        if (k > 0) {
            level = next_level(level, basis);
        }
        for (const Row &r : level) {
            if (row_order(r) < 0) {
                res.truncation_exhausted = true;
                return res;
            }
            SeriesMatrix trial = independent;
            trial.push_back(r.entries);
            if (series_generic_rank(trial).rank == trial.size()) {
                independent = std::move(trial);
                res.generic_rank = independent.size();
                if (res.generic_rank == sys.N) {
                    res.nondegenerate = true;
                    res.k = k;
                    return res;
                }
            }
        }
        if (level.empty()) {
            break;
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Finite type via brackets

namespace
{

struct FlatKey {
    std::size_t comp;
    Monomial mono;
};

struct FlatKeyLess {
    bool operator()(const FlatKey &a, const FlatKey &b) const
    {
        if (a.comp != b.comp) {
            return a.comp < b.comp;
        }
        return GradedLex{}(a.mono, b.mono);
    }
};

using Flat = std::map<FlatKey, GaussianRational, FlatKeyLess>;

Flat flatten(const VectorField &X)
{
    Flat f;
    for (std::size_t k = 0; k < X.size(); ++k) {
        for (const auto &[m, c] : X[k].terms()) {
            f.emplace(FlatKey{k, m}, c);
        }
    }
    return f;
}

void axpy(Flat &y, const GaussianRational &a, const Flat &x)
{
    for (const auto &[key, c] : x) {
        auto [it, inserted] = y.try_emplace(key);
        it->second -= a * c;
        if (it->second.is_zero()) {
            y.erase(it);
        }
    }
}

// Fully reduced row space over C of flattened coefficient vectors.
class LinearSpan
{
  public:
    bool insert(Flat v)
    {
        for (const auto &[pivot, row] : rows_) {
            if (auto it = v.find(pivot); it != v.end()) {
                const GaussianRational c = it->second;
                axpy(v, c, row);
            }
        }
        if (v.empty()) {
            return false;
        }
        const FlatKey pivot = v.begin()->first;
        const GaussianRational inv = GaussianRational(1) / v.begin()->second;
        for (auto &[key, c] : v) {
            c *= inv;
        }
        for (auto &[p, row] : rows_) {
            if (auto it = row.find(pivot); it != row.end()) {
                const GaussianRational c = it->second;
                axpy(row, c, v);
            }
        }
        rows_.emplace_back(pivot, std::move(v));
        return true;
    }

  private:
    std::vector<std::pair<FlatKey, Flat>> rows_;
};

} // namespace

FiniteTypeLie finite_type_lie(const DefiningSystem &sys, std::size_t depth_max)
{
    FiniteTypeLie res;
    res.depth_max = depth_max;
    res.target_dimension = 2 * sys.N - sys.d;
    if (sys.n() == 0) {
        res.note = "no nontrivial CR vector fields (n = 0): the Lie algebra is trivial, so M is not of finite type";
        res.span_by_depth.push_back(0);
        return res;
    }
    const CRFieldBasis basis = cr_field_basis(sys);
    std::vector<VectorField> generators = basis.fields;
    generators.insert(generators.end(), basis.conjugates.begin(), basis.conjugates.end());

    std::vector<Vector> values;
    std::vector<VectorField> layer;
    for (std::size_t depth = 1; depth <= depth_max; ++depth) {
        std::vector<VectorField> candidates;
        if (depth == 1) {
            candidates = generators;
        } else {
            for (const auto &g : generators) {
                for (const auto &X : layer) {
                    candidates.push_back(bracket(g, X));
                }
            }
        }
        if (!candidates.empty() && candidates.front().order() < 0) {
            res.truncation_exhausted = true;
            break;
        }
        LinearSpan span;
        layer.clear();
        for (auto &c : candidates) {
            if (span.insert(flatten(c))) {
                layer.push_back(std::move(c));
            }
        }
        for (const auto &X : layer) {
            values.push_back(X.value_at_zero());
        }
        const std::size_t rk = values.empty() ? 0 : rank(Matrix::from_rows(values, 2 * sys.N));
        res.span_by_depth.push_back(rk);
        if (rk == res.target_dimension) {
            res.finite_type = true;
            res.depth = depth;
            return res;
        }
        if (layer.empty()) {
            res.note = "all brackets of length " + std::to_string(depth) + " vanish through the tracked order";
            break;
        }
    }
    return res;
}

std::size_t default_depth_max(std::size_t N)
{
    return 2 * (N + 1);
}

std::size_t default_k_max(std::size_t N)
{
    return N + 2;
}

} // namespace segrekit
