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

#include "segrekit/segre.hpp"

#include <algorithm>
#include <sstream>

#include "segrekit/errors.hpp"

namespace segrekit
{

namespace
{

std::vector<IndexSet> subsets_descending(std::size_t N, std::size_t d)
{
    std::vector<IndexSet> all;
    IndexSet cur(d);
    for (std::size_t k = 0; k < d; ++k) {
        cur[k] = k;
    }
    while (true) {
        all.push_back(cur);
        std::size_t i = d;
        while (i-- > 0) {
            if (cur[i] < N - d + i) {
                ++cur[i];
                for (std::size_t j = i + 1; j < d; ++j) {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
        if (i == static_cast<std::size_t>(-1)) {
            break;
        }
    }
    std::reverse(all.begin(), all.end());
    return all;
}

Matrix minor_at_zero(const DefiningSystem &sys, const IndexSet &cols)
{
    const Matrix G = gradient_at_zero(sys);
    Matrix A(sys.d, cols.size());
    for (std::size_t r = 0; r < sys.d; ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            A(r, c) = G(r, cols[c]);
        }
    }
    return A;
}

} // namespace

SeriesVector substitute(const DefiningSystem &sys, const SeriesVector &Z, const SeriesVector &zeta)
{
    if (Z.size() != sys.N || zeta.size() != sys.N) {
        throw ContextMismatch("substitute: expected N series for each of Z and zeta");
    }
    std::vector<TruncatedSeries> inner(Z.components());
    inner.insert(inner.end(), zeta.begin(), zeta.end());
    const int order = std::min(Z.order(), zeta.order());
    return compose(sys.rho, SeriesVector(Z.context(), order, std::move(inner)));
}

std::vector<IndexSet> admissible_frames(const DefiningSystem &sys)
{
    std::vector<IndexSet> out;
    for (const IndexSet &s : subsets_descending(sys.N, sys.d)) {
        if (!determinant(minor_at_zero(sys, s)).is_zero()) {
            out.push_back(s);
        }
    }
    return out;
}

SegreMapping solve_gamma(const DefiningSystem &sys, const std::optional<IndexSet> &solved)
{
    if (sys.gradient_rank < sys.d) {
        throw ValidationError("solve_gamma: system is not generic at 0");
    }
    SegreMapping g;
    g.N = sys.N;
    g.n = sys.n();
    if (solved) {
        IndexSet s = *solved;
        std::sort(s.begin(), s.end());
        if (s.size() != sys.d || std::adjacent_find(s.begin(), s.end()) != s.end() || s.back() >= sys.N) {
            throw ValidationError("solved variables must be " + std::to_string(sys.d) + " distinct indices in 1.." +
                                  std::to_string(sys.N));
        }
        if (determinant(minor_at_zero(sys, s)).is_zero()) {
            throw ValidationError("cannot solve for Z" + to_string(s) + ": the minor of rho_Z(0) is singular");
        }
        g.solved = s;
    } else {
        const auto frames = admissible_frames(sys);
        if (frames.empty()) {
            throw InternalError("generic system without an admissible frame");
        }
        g.solved = frames.front();
    }
    const int order = sys.order();
    g.ctx = SeriesContext::make({{"zeta", sys.N}, {"t", g.n}});
    const Matrix Ainv = inverse(minor_at_zero(sys, g.solved));

    std::vector<TruncatedSeries> Z;
    std::vector<TruncatedSeries> zeta;
    std::size_t free = 0;
    for (std::size_t k = 0; k < sys.N; ++k) {
        const bool is_solved = std::find(g.solved.begin(), g.solved.end(), k) != g.solved.end();
        Z.push_back(is_solved ? TruncatedSeries(g.ctx, order)
                              : TruncatedSeries::variable(g.ctx, order, g.ctx->index("t", free++)));
        zeta.push_back(TruncatedSeries::variable(g.ctx, order, k));
    }
    const SeriesVector zetav(g.ctx, order, zeta);

    // Chord iteration: each step fixes at least one more degree.
    for (int iter = 0; iter <= order + 1; ++iter) {
        const SeriesVector r = substitute(sys, SeriesVector(g.ctx, order, Z), zetav);
        if (std::all_of(r.begin(), r.end(), [](const TruncatedSeries &s) { return s.is_zero(); })) {
            g.gamma = SeriesVector(g.ctx, order, Z);
            return g;
        }
        for (std::size_t a = 0; a < sys.d; ++a) {
            TruncatedSeries delta(g.ctx, order);
            for (std::size_t b = 0; b < sys.d; ++b) {
                if (!Ainv(a, b).is_zero()) {
                    delta += r[b] * Ainv(a, b);
                }
            }
            Z[g.solved[a]] -= delta;
        }
    }
    throw InternalError("solve_gamma: iteration did not converge through order " + std::to_string(order));
}

ContextPtr segre_context(std::size_t j, std::size_t n)
{
    std::vector<VarBlock> blocks;
    for (std::size_t k = 1; k <= j; ++k) {
        blocks.push_back({"t" + std::to_string(k), n});
    }
    return SeriesContext::make(std::move(blocks));
}

std::vector<IteratedSegre> iterate_segre_chain(const SegreMapping &gamma, std::size_t jmax)
{
    if (jmax < 1) {
        throw std::invalid_argument("iterate_segre: j must be positive");
    }
    std::vector<IteratedSegre> out;
    const int order = gamma.gamma.order();
    for (std::size_t j = 1; j <= jmax; ++j) {
        const ContextPtr ctx = segre_context(j, gamma.n);
        std::vector<TruncatedSeries> inner;
        if (j == 1) {
            for (std::size_t k = 0; k < gamma.N; ++k) {
                inner.emplace_back(ctx, order);
            }
        } else {
            const SeriesVector prev = embed(conj_coeffs(out.back().v), ctx);
            inner = prev.components();
        }
        const std::string blk = "t" + std::to_string(j);
        for (std::size_t k = 0; k < gamma.n; ++k) {
            inner.push_back(TruncatedSeries::variable(ctx, order, ctx->index(blk, k)));
        }
        IteratedSegre it;
        it.j = j;
        it.ctx = ctx;
        it.v = compose(gamma.gamma, SeriesVector(ctx, order, std::move(inner)));
        out.push_back(std::move(it));
    }
    return out;
}

IteratedSegre iterate_segre(const SegreMapping &gamma, std::size_t j)
{
    return iterate_segre_chain(gamma, j).back();
}

SeriesVector check_idv(const DefiningSystem &sys, const IteratedSegre &vk, const IteratedSegre &vk1)
{
    if (vk1.j != vk.j + 1) {
        throw std::invalid_argument("check_idv: need consecutive iterates");
    }
    return substitute(sys, vk1.v, embed(conj_coeffs(vk.v), vk1.ctx));
}

SeriesVector check_idv(const DefiningSystem &sys, const SegreMapping &gamma, std::size_t k)
{
    const auto chain = iterate_segre_chain(gamma, k + 1);
    return check_idv(sys, chain[k - 1], chain[k]);
}

SeriesMatrix jacobian(const SeriesVector &F, const std::vector<std::string> &blocks)
{
    const auto &ctx = *F.context();
    std::vector<std::size_t> vars;
    for (const auto &b : blocks) {
        const std::size_t off = ctx.block_offset(b);
        for (std::size_t k = 0; k < ctx.block(b).arity; ++k) {
            vars.push_back(off + k);
        }
    }
    SeriesMatrix J;
    for (const auto &f : F) {
        std::vector<TruncatedSeries> row;
        for (auto v : vars) {
            row.push_back(differentiate(f, v));
        }
        J.push_back(std::move(row));
    }
    return J;
}

RankCertificate generic_rank(const SeriesVector &F, const std::vector<std::string> &blocks)
{
    const auto &ctx = *F.context();
    RankCertificate cert;
    std::vector<std::size_t> block_start;
    for (const auto &b : blocks) {
        block_start.push_back(cert.column_vars.size());
        const std::size_t off = ctx.block_offset(b);
        for (std::size_t k = 0; k < ctx.block(b).arity; ++k) {
            cert.column_vars.push_back(ctx.var_name(off + k));
        }
    }
    // newest block first, ascending within a block
    std::vector<std::size_t> col_order;
    for (std::size_t b = blocks.size(); b-- > 0;) {
        for (std::size_t k = 0; k < ctx.block(blocks[b]).arity; ++k) {
            col_order.push_back(block_start[b] + k);
        }
    }
    const SeriesMatrix J = jacobian(F, blocks);
    cert.rows = F.size();
    cert.cols = cert.column_vars.size();
    cert.truncation_order = F.order() - 1;
    const GenericRank gr = series_generic_rank(J, col_order);
    cert.certified_rank = gr.rank;
    cert.witness = gr.witness;
    cert.conclusive = cert.certified_rank == std::min(cert.rows, cert.cols);
    return cert;
}

RankCertificate generic_rank(const IteratedSegre &vj)
{
    std::vector<std::string> blocks;
    for (const auto &b : vj.ctx->blocks()) {
        blocks.push_back(b.name);
    }
    return generic_rank(vj.v, blocks);
}

bool RankCertificate::verify(const SeriesVector &F) const
{
    if (!witness) {
        return certified_rank == 0;
    }
    if (witness->rows.size() != certified_rank || witness->cols.size() != certified_rank) {
        return false;
    }
    const auto &ctx = *F.context();
    std::vector<std::size_t> vars;
    for (const auto &name : column_vars) {
        const auto idx = ctx.find_var(name);
        if (!idx) {
            return false;
        }
        vars.push_back(*idx);
    }
    SeriesMatrix sub;
    for (auto r : witness->rows) {
        std::vector<TruncatedSeries> row;
        for (auto c : witness->cols) {
            row.push_back(differentiate(F[r], vars[c]));
        }
        sub.push_back(std::move(row));
    }
    const TruncatedSeries det = determinant(sub);
    if (static_cast<int>(witness->monomial.degree()) > det.order()) {
        return false;
    }
    return det.coeff(witness->monomial) == witness->coefficient;
}

std::string RankCertificate::describe(const SeriesContext &ctx) const
{
    std::ostringstream os;
    os << "rank " << certified_rank << " of " << rows << "x" << cols << " Jacobian"
       << (conclusive ? " (conclusive)" : " (lower bound through order " + std::to_string(truncation_order) + ")");
    if (witness) {
        os << "; witness minor rows {";
        for (std::size_t k = 0; k < witness->rows.size(); ++k) {
            os << (k ? "," : "") << witness->rows[k] + 1;
        }
        os << "} cols {";
        for (std::size_t k = 0; k < witness->cols.size(); ++k) {
            os << (k ? "," : "") << column_vars[witness->cols[k]];
        }
        os << "} has coefficient " << witness->coefficient.to_string() << " at "
           << witness->monomial.to_string(ctx);
    }
    return os.str();
}

FiniteTypeSegre finite_type_segre(const DefiningSystem &sys, const std::optional<IndexSet> &solved)
{
    const SegreMapping g = solve_gamma(sys, solved);
    FiniteTypeSegre res;
    res.order = sys.order();
    res.solved = g.solved;
    for (const auto &vj : iterate_segre_chain(g, sys.d + 1)) {
        res.chain.push_back(generic_rank(vj));
    }
    res.finite_type = res.chain.back().certified_rank == sys.N;
    return res;
}

GammaIndependence gamma_independence_check(const DefiningSystem &sys)
{
    GammaIndependence out;
    out.frames = admissible_frames(sys);
    out.degenerate = out.frames.size() < 2;
    for (const auto &f : out.frames) {
        const FiniteTypeSegre ft = finite_type_segre(sys, f);
        std::vector<std::size_t> ranks;
        for (const auto &c : ft.chain) {
            ranks.push_back(c.certified_rank);
        }
        if (!out.ranks.empty() && ranks != out.ranks.front()) {
            out.consistent = false;
        }
        out.ranks.push_back(std::move(ranks));
    }
    return out;
}

std::string to_string(const IndexSet &s)
{
    std::string out = "{";
    for (std::size_t k = 0; k < s.size(); ++k) {
        out += (k ? "," : "") + std::to_string(s[k] + 1);
    }
    return out + "}";
}

} // namespace segrekit
