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

#include "segrekit/report.hpp"

#include <chrono>
#include <sstream>

namespace segrekit
{

namespace
{

constexpr const char *kSegreCriterion = "Segre rank criterion: finite type iff Rk v^(d+1) = N";
constexpr const char *kLieCriterion = "Lie bracket criterion: CR fields and conjugates span CT_0 M";
constexpr const char *kCRCriterion = "r(p) = d - dim span {rho_j,Z(p)}";
constexpr const char *kLeviCriterion = "span {rho_Z(0), L rho_Z(0)} = C^N";
constexpr const char *kKCriterion = "span {L^alpha rho_Z(0) : |alpha| <= k} = C^N";
constexpr const char *kHoloCriterion = "generic rank of {L^alpha rho_Z} reaches N";

nlohmann::ordered_json opt(const std::optional<std::size_t> &v)
{
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

std::vector<std::size_t> one_based(const IndexSet &s)
{
    std::vector<std::size_t> out;
    for (auto k : s) {
        out.push_back(k + 1);
    }
    return out;
}

std::vector<std::size_t> chain_ranks(const FiniteTypeSegre &ft)
{
    std::vector<std::size_t> out;
    for (const auto &c : ft.chain) {
        out.push_back(c.certified_rank);
    }
    return out;
}

} // namespace

AnalysisReport analyze(const ManifoldSpec &spec, const AnalyzeOptions &opts)
{
    const auto start = std::chrono::steady_clock::now();
    AnalysisReport r;
    r.id = spec.name;
    r.spec = spec;
    ComplexifyOptions co;
    co.order = opts.order;
    r.system = complexify(spec, co);
    const DefiningSystem &sys = r.system;
    const std::size_t k_max = opts.k_max.value_or(default_k_max(sys.N));
    const std::size_t depth_max = opts.depth_max.value_or(default_depth_max(sys.N));

    r.cr = cr_number(sys);
    r.k_nondeg = k_nondegeneracy(sys, k_max);
    r.holo = holomorphic_nondegeneracy(sys, k_max);
    r.segre = finite_type_segre(sys);
    r.lie = finite_type_lie(sys, depth_max);

    const SegreMapping g = solve_gamma(sys, r.segre.solved);
    const auto chain = iterate_segre_chain(g, sys.d + 3);
    for (std::size_t k = 1; k <= sys.d + 2; ++k) {
        const SeriesVector res = check_idv(sys, chain[k - 1], chain[k]);
        const bool zero = std::all_of(res.begin(), res.end(), [](const TruncatedSeries &s) { return s.is_zero(); });
        r.idv_zero.push_back(zero);
        if (!zero) {
            r.fatal.push_back("iterated Segre identity residual is nonzero at k=" + std::to_string(k));
        }
    }
    for (std::size_t j = 1; j < r.segre.chain.size(); ++j) {
        if (r.segre.chain[j].certified_rank < r.segre.chain[j - 1].certified_rank) {
            r.fatal.push_back("rank chain is not monotone");
        }
    }
    if (!r.finite_type_agree()) {
        r.fatal.push_back(std::string("finite type verdicts disagree: Segre rank says ") +
                          (r.segre.finite_type ? "FINITE_TYPE" : "NOT_FINITE_TYPE_TO_ORDER") + ", Lie brackets say " +
                          (r.lie.finite_type ? "FINITE_TYPE" : "INCONCLUSIVE") +
                          " (raise --order or --depthmax to rule out truncation)");
    }
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

nlohmann::ordered_json to_json(const RankCertificate &c, const SeriesContext &ctx)
{
    nlohmann::ordered_json j;
    j["certified_rank"] = c.certified_rank;
    j["rows"] = c.rows;
    j["cols"] = c.cols;
    j["truncation_order"] = c.truncation_order;
    j["conclusive"] = c.conclusive;
    if (c.witness) {
        std::vector<std::size_t> rows;
        std::vector<std::string> cols;
        for (auto r : c.witness->rows) {
            rows.push_back(r + 1);
        }
        for (auto k : c.witness->cols) {
            cols.push_back(c.column_vars[k]);
        }
        j["witness"] = {{"rows", rows},
                        {"cols", cols},
                        {"monomial", c.witness->monomial.to_string(ctx)},
                        {"coefficient", c.witness->coefficient.to_string()}};
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

nlohmann::ordered_json to_json(const AnalysisReport &r, bool timing)
{
    const DefiningSystem &sys = r.system;
    nlohmann::ordered_json j;
    j["schema"] = kReportSchema;
    j["manifold"] = r.id;
    j["N"] = sys.N;
    j["d"] = sys.d;
    j["n"] = sys.n();
    j["order"] = sys.order();
    std::vector<std::string> p;
    for (const auto &c : r.spec.basepoint) {
        p.push_back(c.to_string());
    }
    j["basepoint"] = p;
    std::vector<std::string> rho;
    for (const auto &s : sys.rho) {
        rho.push_back(s.to_string());
    }
    j["rho"] = rho;

    j["cr"] = {{"criterion", kCRCriterion},
               {"rank_at_zero", r.cr.rank_at_zero},
               {"generic_rank", r.cr.generic_rank},
               {"r_at_zero", r.cr.r_at_zero},
               {"verdict", to_string(r.cr.verdict)}};

    j["levi"] = {{"criterion", kLeviCriterion}, {"nondegenerate", r.k_nondeg.levi_nondegenerate()}};
    j["k_nondegeneracy"] = {{"criterion", kKCriterion},
                            {"verdict", r.k_nondeg.k ? "FINITELY_NONDEGENERATE" : "INCONCLUSIVE"},
                            {"k", opt(r.k_nondeg.k)},
                            {"k_max", r.k_nondeg.k_max},
                            {"rank_at_zero", r.k_nondeg.rank_at_zero},
                            {"truncation_exhausted", r.k_nondeg.truncation_exhausted}};
    j["holomorphic_nondegeneracy"] = {
        {"criterion", kHoloCriterion},
        {"verdict", r.holo.nondegenerate ? "HOLOMORPHICALLY_NONDEGENERATE" : "DEGENERATE_TO_ORDER"},
        {"k", opt(r.holo.k)},
        {"generic_rank", r.holo.generic_rank},
        {"k_max", r.holo.k_max},
        {"order", r.holo.order},
        {"truncation_exhausted", r.holo.truncation_exhausted}};

    nlohmann::ordered_json certs = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < r.segre.chain.size(); ++k) {
        certs.push_back(to_json(r.segre.chain[k], *segre_context(k + 1, sys.n())));
    }
    nlohmann::ordered_json ft;
    ft["segre"] = {{"criterion", kSegreCriterion},
                   {"verdict", r.segre.finite_type ? "FINITE_TYPE" : "NOT_FINITE_TYPE_TO_ORDER"},
                   {"order", r.segre.order},
                   {"solved_variables", one_based(r.segre.solved)},
                   {"rank_chain", chain_ranks(r.segre)},
                   {"certificates", certs}};
    ft["lie"] = {{"criterion", kLieCriterion},
                 {"verdict", r.lie.finite_type ? "FINITE_TYPE" : "INCONCLUSIVE"},
                 {"depth", opt(r.lie.depth)},
                 {"depth_max", r.lie.depth_max},
                 {"target_dimension", r.lie.target_dimension},
                 {"span_by_depth", r.lie.span_by_depth},
                 {"truncation_exhausted", r.lie.truncation_exhausted},
                 {"note", r.lie.note}};
    ft["agreement"] = r.finite_type_agree();
    j["finite_type"] = ft;
    j["idv_residual_zero"] = r.idv_zero;
    j["fatal"] = r.fatal;
    if (timing) {
        j["timing_ms"] = r.elapsed_ms;
    }
    return j;
}

std::string to_text(const AnalysisReport &r, bool timing)
{
    const DefiningSystem &sys = r.system;
    std::ostringstream os;
    os << "manifold " << r.id << ": N=" << sys.N << " d=" << sys.d << " n=" << sys.n() << " order=" << sys.order()
       << "\n";
    for (std::size_t j = 0; j < sys.d; ++j) {
        os << "  rho" << j + 1 << " = " << sys.rho[j].to_string() << "\n";
    }
    os << "CR number [" << kCRCriterion << "]: r(0)=" << r.cr.r_at_zero << ", generic rank "
       << r.cr.generic_rank << ", " << to_string(r.cr.verdict) << "\n";
    os << "Levi [" << kLeviCriterion << "]: "
       << (r.k_nondeg.levi_nondegenerate() ? "nondegenerate" : "degenerate or undecided") << "\n";
    os << "k-nondegeneracy [" << kKCriterion << "]: ";
    if (r.k_nondeg.k) {
        os << *r.k_nondeg.k << "-nondegenerate\n";
    } else {
        os << "INCONCLUSIVE up to k=" << r.k_nondeg.k_reached
           << (r.k_nondeg.truncation_exhausted ? " (truncation exhausted)" : "") << "\n";
    }
    os << "holomorphic nondegeneracy [" << kHoloCriterion << "]: ";
    if (r.holo.nondegenerate) {
        os << "HOLOMORPHICALLY_NONDEGENERATE (generic rank N at k=" << *r.holo.k << ")\n";
    } else {
        os << "DEGENERATE_TO_ORDER (generic rank " << r.holo.generic_rank << " through k=" << r.holo.k_max
           << ", order " << r.holo.order << ")\n";
    }
    os << "finite type [" << kSegreCriterion << "]: "
       << (r.segre.finite_type ? "FINITE_TYPE" : "NOT_FINITE_TYPE_TO_ORDER") << ", rank chain";
    for (const auto &c : r.segre.chain) {
        os << " " << c.certified_rank;
    }
    os << ", solved for Z" << to_string(r.segre.solved) << "\n";
    const auto &last = r.segre.chain.back();
    os << "  certificate: " << last.describe(*segre_context(r.segre.chain.size(), sys.n())) << "\n";
    os << "finite type [" << kLieCriterion << "]: ";
    if (r.lie.finite_type) {
        os << "FINITE_TYPE at bracket depth " << *r.lie.depth << "\n";
    } else {
        os << "INCONCLUSIVE through depth " << r.lie.depth_max;
        if (!r.lie.note.empty()) {
            os << " (" << r.lie.note << ")";
        }
        os << "\n";
    }
    os << "iterated Segre identity residuals k=1.." << r.idv_zero.size() << ": ";
    bool all = true;
    for (bool z : r.idv_zero) {
        all = all && z;
    }
    os << (all ? "all zero" : "NONZERO") << "\n";
    for (const auto &f : r.fatal) {
        os << "FATAL: " << f << "\n";
    }
    if (timing) {
        os << "elapsed: " << r.elapsed_ms << " ms\n";
    }
    return os.str();
}

} // namespace segrekit
