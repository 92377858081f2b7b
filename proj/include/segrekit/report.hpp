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

#ifndef SEGREKIT_REPORT_HPP
#define SEGREKIT_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "segrekit/maps.hpp"
#include "segrekit/nondegeneracy.hpp"
#include "segrekit/parser.hpp"
#include "segrekit/segre.hpp"

namespace segrekit
{

inline constexpr const char *kReportSchema = "segre-kit-report/1";

struct AnalyzeOptions {
    std::optional<int> order;
    std::optional<std::size_t> k_max;
    std::optional<std::size_t> depth_max;
};

/// Full verdict sheet for one manifold.
struct AnalysisReport {
    std::string id;
    ManifoldSpec spec;
    DefiningSystem system;
    CRNumber cr;
    KNondegeneracy k_nondeg;
    HolomorphicNondegeneracy holo;
    FiniteTypeSegre segre;
    FiniteTypeLie lie;
    std::vector<bool> idv_zero; // k = 1 .. d+2
    std::vector<std::string> fatal;
    double elapsed_ms = 0;

    bool finite_type_agree() const { return segre.finite_type == lie.finite_type; }
};

AnalysisReport analyze(const ManifoldSpec &spec, const AnalyzeOptions &opts = {});

nlohmann::ordered_json to_json(const AnalysisReport &r, bool timing = false);
nlohmann::ordered_json to_json(const RankCertificate &c, const SeriesContext &ctx);
std::string to_text(const AnalysisReport &r, bool timing = false);

} // namespace segrekit

#endif
