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

// segre-kit command line front end.

#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "segrekit/errors.hpp"
#include "segrekit/maps.hpp"
#include "segrekit/report.hpp"

using namespace segrekit;
using ojson = nlohmann::ordered_json;

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitFatal = 3;

constexpr const char *kLewyText = "name=lewy\nN=2\nd=1\nrho:\nIm(Z2) - abs2(Z1)\n";

/// Raised by the demo when a printed claim fails its exact check.
struct Fatal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string &what)
{
    if (!ok) {
        throw Fatal(what);
    }
}

/// Parses a constant such as "2", "-1/3" or "(3+4*i)/5" with the spec-file
/// expression grammar.
GaussianRational parse_constant(const std::string &text)
{
    const MapSpec spec = parse_map("N=1\nF:\n(" + text + ")*Z1\n");
    const ContextPtr ctx = map_context(1);
    const TruncatedSeries s = evaluate_holomorphic(*spec.exprs[0], ctx, 1, 0);
    if (s.size() != 1 || s.terms().begin()->first.degree() != 1) {
        throw ValidationError("not a constant: " + text);
    }
    return s.terms().begin()->second;
}

std::optional<IndexSet> parse_gamma_vars(const std::vector<std::size_t> &vars, std::size_t N)
{
    if (vars.empty()) {
        return std::nullopt;
    }
    IndexSet s;
    for (auto k : vars) {
        if (k == 0 || k > N) {
            throw ValidationError("--gamma-vars index " + std::to_string(k) + " out of range 1.." + std::to_string(N));
        }
        s.push_back(k - 1);
    }
    std::sort(s.begin(), s.end());
    return s;
}

std::string components_to_string(const SeriesVector &v)
{
    std::ostringstream os;
    os << "(";
    for (std::size_t k = 0; k < v.size(); ++k) {
        os << (k ? ", " : "") << v[k].to_string();
    }
    os << ")";
    return os.str();
}

ojson components_json(const SeriesVector &v)
{
    ojson a = ojson::array();
    for (const auto &c : v) {
        a.push_back(c.to_string());
    }
    return a;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
    std::vector<std::string> files;
    std::optional<int> order;
    std::optional<std::size_t> k_max;
    std::optional<std::size_t> depth_max;
    bool json = false;
    bool timing = false;
    std::size_t jobs = 0;
};

struct FileOutcome {
    std::optional<AnalysisReport> report;
    std::string error;
    int code = kExitOk;
};

FileOutcome analyze_file(const std::string &path, const AnalyzeOptions &opts)
{
    FileOutcome out;
    try {
        out.report = analyze(load_manifold(path), opts);
        if (!out.report->fatal.empty()) {
            out.code = kExitFatal;
        }
    } catch (const InternalError &e) {
        out.error = path + ": FATAL: " + e.what();
        out.code = kExitFatal;
    } catch (const segrekit::ParseError &e) {
        out.error = path + ":" + e.what();
        out.code = kExitInput;
    } catch (const std::exception &e) {
        out.error = path + ": " + e.what();
        out.code = kExitInput;
    }
    return out;
}

int cmd_analyze(const AnalyzeArgs &args)
{
    AnalyzeOptions opts{args.order, args.k_max, args.depth_max};
    std::vector<FileOutcome> outcomes(args.files.size());
    const std::size_t jobs = std::max<std::size_t>(1, args.jobs ? args.jobs : std::thread::hardware_concurrency());
    // Files are independent; results are collected and printed in input order.
    for (std::size_t base = 0; base < args.files.size(); base += jobs) {
        std::vector<std::future<FileOutcome>> batch;
        for (std::size_t k = base; k < std::min(args.files.size(), base + jobs); ++k) {
            batch.push_back(std::async(std::launch::async, analyze_file, args.files[k], opts));
        }
        for (std::size_t k = 0; k < batch.size(); ++k) {
            outcomes[base + k] = batch[k].get();
        }
    }

    int code = kExitOk;
    ojson reports = ojson::array();
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        const auto &o = outcomes[k];
        code = std::max(code, o.code);
        if (!o.report) {
            std::cerr << o.error << "\n";
            continue;
        }
        if (args.json) {
            ojson j = to_json(*o.report, args.timing);
            j["file"] = args.files[k];
            reports.push_back(std::move(j));
        } else {
            if (k) {
                std::cout << "\n";
            }
            std::cout << to_text(*o.report, args.timing);
        }
    }
    if (args.json) {
        std::cout << (reports.size() == 1 ? reports[0] : reports).dump(2) << "\n";
    }
    return code;
}

// ---------------------------------------------------------------------------
// segre

struct SegreArgs {
    std::string file;
    std::size_t j = 0;
    std::vector<std::size_t> gamma_vars;
    std::optional<int> order;
    bool json = false;
};

int cmd_segre(const SegreArgs &args)
{
    ComplexifyOptions co;
    co.order = args.order;
    const DefiningSystem sys = complexify(load_manifold(args.file), co);
    const auto solved = parse_gamma_vars(args.gamma_vars, sys.N);
    const SegreMapping g = solve_gamma(sys, solved);
    const std::size_t J = args.j ? args.j : sys.d + 1;
    const auto chain = iterate_segre_chain(g, J + 1);

    ojson j;
    j["schema"] = kReportSchema;
    j["manifold"] = sys.name;
    j["order"] = sys.order();
    j["solved_variables"] = ojson::array();
    for (auto k : g.solved) {
        j["solved_variables"].push_back(k + 1);
    }
    j["gamma"] = components_json(g.gamma);
    j["iterated"] = ojson::array();

    std::ostringstream os;
    os << "manifold " << sys.name << ": N=" << sys.N << " d=" << sys.d << " order=" << sys.order() << "\n";
    os << "Segre variety mapping, solved for Z" << to_string(g.solved) << ":\n";
    os << "  gamma = " << components_to_string(g.gamma) << "\n";
    bool idv_ok = true;
    for (std::size_t k = 1; k <= J; ++k) {
        const IteratedSegre &vk = chain[k - 1];
        const RankCertificate cert = generic_rank(vk);
        const SeriesVector res = check_idv(sys, vk, chain[k]);
        const bool zero = std::all_of(res.begin(), res.end(), [](const TruncatedSeries &s) { return s.is_zero(); });
        idv_ok = idv_ok && zero;
        os << "  v" << k << " = " << components_to_string(vk.v) << "\n";
        os << "    Rk v" << k << ": " << cert.describe(*vk.ctx) << "\n";
        os << "    identity rho(v" << k + 1 << ", conj v" << k << ") = 0: " << (zero ? "yes" : "NO") << "\n";
        j["iterated"].push_back({{"j", k},
                                 {"v", components_json(vk.v)},
                                 {"rank", to_json(cert, *vk.ctx)},
                                 {"idv_residual_zero", zero}});
    }
    if (args.json) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << os.str();
    }
    if (!idv_ok) {
        std::cerr << "FATAL: iterated Segre identity residual is nonzero\n";
        return kExitFatal;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// check-map

struct CheckMapArgs {
    std::string map, source, target;
    bool classify = false;
    std::string jets_vs;
    int K = 1;
    std::optional<int> order;
    std::uint64_t seed = 1;
    bool json = false;
};

int cmd_check_map(const CheckMapArgs &args)
{
    ComplexifyOptions co;
    co.order = args.order;
    const DefiningSystem M = complexify(load_manifold(args.source), co);
    const DefiningSystem Mp = complexify(load_manifold(args.target), co);
    const MapSpec spec = load_map(args.map);
    const int order = args.order.value_or(spec.order.value_or(M.order()));
    const FormalMap F = FormalMap::from_spec(spec, order, args.seed);
    const SendsInto s = sends_into(F, M, Mp);

    ojson j;
    j["schema"] = kReportSchema;
    j["map"] = F.name;
    j["source"] = M.name;
    j["target"] = Mp.name;
    j["seed"] = args.seed;
    j["order"] = s.order;
    std::ostringstream os;
    os << "map " << F.name << ": C^" << F.N << " -> C^" << F.target_dimension() << ", " << M.name << " -> " << Mp.name
       << ", seed " << args.seed << "\n";
    os << "sends into [rho'(F(gamma(zeta,t)), conj F(zeta)) = 0 as formal series]: ";
    if (s.pass) {
        os << "PASS through order " << s.order << "\n";
        j["sends_into"] = {{"verdict", "PASS"}};
    } else {
        os << "FAIL: component " << s.component + 1 << ", term (" << s.coefficient.to_string() << ")*" << s.monomial
           << " of degree " << s.degree << "\n";
        j["sends_into"] = {{"verdict", "FAIL"},
                           {"component", s.component + 1},
                           {"monomial", s.monomial},
                           {"coefficient", s.coefficient.to_string()},
                           {"degree", s.degree}};
    }
    if (args.classify && s.pass) {
        const MapClassification c = classify(F, M, Mp);
        os << "invertible: " << (c.invertible ? "yes" : "no") << "\n";
        os << "finite: " << to_string(c.finite);
        if (c.codimension) {
            os << " (codimension " << *c.codimension << ")";
        }
        if (!c.quotient_dimensions.empty()) {
            os << ", quotient dimensions";
            for (auto q : c.quotient_dimensions) {
                os << " " << q;
            }
        }
        os << "\n";
        os << "CR transversal: " << (c.cr_transversal ? "yes" : "no") << "\n";
        j["classification"] = {{"invertible", c.invertible},
                               {"finite", to_string(c.finite)},
                               {"codimension", c.codimension ? ojson(*c.codimension) : ojson(nullptr)},
                               {"quotient_dimensions", c.quotient_dimensions},
                               {"cr_transversal", c.cr_transversal}};
    }
    if (!args.jets_vs.empty()) {
        const FormalMap G = FormalMap::from_spec(load_map(args.jets_vs), order, args.seed);
        const bool agree = jets_agree(F, G, args.K);
        os << "jets of order " << args.K << " agree with " << G.name << ": " << (agree ? "yes" : "no") << "\n";
        j["jets"] = {{"other", G.name}, {"K", args.K}, {"agree", agree}};
    }
    if (args.json) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << os.str();
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// jets

struct JetsArgs {
    std::vector<std::string> maps;
    std::string source, target;
    std::size_t power_family = 0;
    int K = 1;
    std::optional<int> order;
    std::uint64_t seed = 1;
    bool json = false;
};

int cmd_jets(const JetsArgs &args)
{
    if (args.source.empty()) {
        throw ValidationError("jets: --source is required");
    }
    ComplexifyOptions co;
    co.order = args.order;
    const DefiningSystem M = complexify(load_manifold(args.source), co);
    const DefiningSystem Mp = args.target.empty() ? M : complexify(load_manifold(args.target), co);
    const int order = M.order();
    std::vector<FormalMap> family;
    for (const auto &path : args.maps) {
        family.push_back(FormalMap::from_spec(load_map(path), order, args.seed));
    }
    if (args.power_family) {
        // identity and Z -> (Z1, .., Z_{N-1}, Z_N + Z_N^k)
        family.push_back(FormalMap::identity(M.N, order));
        const ContextPtr ctx = map_context(M.N);
        for (std::size_t k = 2; k <= args.power_family; ++k) {
            std::vector<TruncatedSeries> comps;
            for (std::size_t i = 0; i < M.N; ++i) {
                comps.push_back(TruncatedSeries::variable(ctx, order, i));
            }
            comps.back() += pow(comps.back(), static_cast<unsigned>(k));
            family.push_back(FormalMap::from_components("power" + std::to_string(k),
                                                        SeriesVector(ctx, order, comps)));
        }
    }
    const DeterminationReport rep = determination_experiment(M, Mp, family, args.K);

    ojson j;
    j["schema"] = kReportSchema;
    j["source"] = M.name;
    j["target"] = Mp.name;
    j["K"] = rep.K;
    j["seed"] = args.seed;
    std::ostringstream os;
    os << "jet classes of order " << rep.K << " on " << M.name << " -> " << Mp.name << ":\n";
    ojson classes = ojson::array();
    for (std::size_t c = 0; c < rep.classes.size(); ++c) {
        std::vector<std::string> names;
        for (auto idx : rep.classes[c]) {
            names.push_back(family[idx].name + (rep.sends_into[idx] ? "" : " (does not send M into M')"));
        }
        const bool failing = std::find(rep.failing_classes.begin(), rep.failing_classes.end(), c) !=
                             rep.failing_classes.end();
        os << "  {";
        for (std::size_t k = 0; k < names.size(); ++k) {
            os << (k ? ", " : "") << names[k];
        }
        os << "}" << (failing ? "  distinct maps with equal jets" : "") << "\n";
        classes.push_back({{"maps", names}, {"distinct_maps_with_equal_jets", failing}});
    }
    os << "determination by " << rep.K << "-jets: " << (rep.determination_fails() ? "FAILS" : "holds on this family")
       << "\n";
    j["classes"] = classes;
    j["determination_fails"] = rep.determination_fails();
    if (args.json) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << os.str();
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// demo-lewy

struct DemoArgs {
    std::string map = "identity";
    int order = 8;
    std::uint64_t seed = 1;
};

int cmd_demo_lewy(const DemoArgs &args)
{
    ComplexifyOptions co;
    co.order = args.order;
    const DefiningSystem lewy = complexify(parse_manifold(kLewyText), co);
    const int T = lewy.order();
    const GaussianRational I = GaussianRational::i();
    std::ostream &out = std::cout;

    out << "Lewy hypersurface Im w = |z|^2, complexified: rho = " << lewy.rho[0].to_string() << "\n";

    // Segre variety mapping and the first three iterates.
    const SegreMapping g = solve_gamma(lewy);
    {
        const ContextPtr c = g.ctx;
        auto var = [&](const char *name) { return TruncatedSeries::variable(c, T, name); };
        const SeriesVector expected(c, T, {var("t1"), var("zeta2") + 2 * I * var("zeta1") * var("t1")});
        require(g.gamma == expected, "gamma differs from (t, tau + 2i t chi)");
    }
    out << "gamma(chi, tau; t) = " << components_to_string(g.gamma) << "   [checked]\n";

    const auto chain = iterate_segre_chain(g, 4);
    for (std::size_t k = 1; k <= 3; ++k) {
        const IteratedSegre &vk = chain[k - 1];
        auto t = [&](std::size_t idx) { return TruncatedSeries::variable(vk.ctx, T, "t" + std::to_string(idx)); };
        const TruncatedSeries zero(vk.ctx, T);
        SeriesVector expected;
        if (k == 1) {
            expected = SeriesVector(vk.ctx, T, {t(1), zero});
        } else if (k == 2) {
            expected = SeriesVector(vk.ctx, T, {t(2), 2 * I * t(1) * t(2)});
        } else {
            expected = SeriesVector(vk.ctx, T, {t(3), -2 * I * t(1) * t(2) + 2 * I * t(2) * t(3)});
        }
        require(vk.v == expected, "v" + std::to_string(k) + " differs from its closed form");
        const RankCertificate cert = generic_rank(vk);
        require(cert.verify(vk.v), "rank certificate of v" + std::to_string(k) + " does not verify");
        out << "v" << k << " = " << components_to_string(vk.v) << "   Rk = " << cert.certified_rank
            << "   [checked]\n";
    }
    for (std::size_t k = 1; k <= 2; ++k) {
        const SeriesVector res = check_idv(lewy, chain[k - 1], chain[k]);
        require(std::all_of(res.begin(), res.end(), [](const TruncatedSeries &s) { return s.is_zero(); }),
                "rho(v" + std::to_string(k + 1) + ", conj v" + std::to_string(k) + ") is not zero");
        out << "rho(v" << k + 1 << ", conj v" << k << ") = 0   [checked]\n";
    }
    require(generic_rank(chain[1]).certified_rank == 2, "Rk v2 is not 2");
    out << "Rk v2 = 2 = N: finite type at 0   [checked]\n";

    // The map.
    FormalMap F;
    std::optional<GaussianRational> r_coeff; // R = r_coeff * t2 for builtin maps
    const std::string &m = args.map;
    if (m == "identity") {
        F = FormalMap::identity(2, T);
        r_coeff = GaussianRational(1);
    } else if (m.rfind("dilation:", 0) == 0) {
        const GaussianRational lam = parse_constant(m.substr(9));
        if (lam.im() != 0 || lam.re() == 0) {
            throw ValidationError("dilation factor must be a nonzero rational");
        }
        F = lewy_dilation(lam.re(), T);
        r_coeff = lam;
    } else if (m.rfind("rotation:", 0) == 0) {
        const GaussianRational u = parse_constant(m.substr(9));
        F = lewy_rotation(u, T);
        r_coeff = u.conj();
    } else {
        F = FormalMap::from_spec(load_map(m), T, args.seed);
    }
    out << "map " << (F.name.empty() ? m : F.name) << ": f = " << F.components[0].to_string()
        << "\n    g = " << F.components[1].to_string() << "\n";

    const ReflectionResult r = lewy_reflection(F, lewy);
    require(r.identity_vanishes, "rho(F(v3), conj F(conj v2)) is not zero");
    out << "g(v3) - conj g(conj v2) - 2i f(v3) conj f(conj v2) = 0   [checked]\n";
    require(r.g_vanishes_on_axis, "g(z, 0) is not zero");
    out << "g(z, 0) = 0   [checked]\n";
    out << "R(t1, t2) = (g_z + 2i t2 g_w)(t1, 0) / (2i (f_z + 2i t2 f_w)(t1, 0))\n";
    out << "          = " << r.R.to_string() << "\n";
    if (r_coeff) {
        const TruncatedSeries expected = *r_coeff * TruncatedSeries::variable(r.R.context(), r.R.order(), "t2");
        require(r.R == expected, "R differs from " + r_coeff->to_string() + "*t2");
        out << "R = (" << r_coeff->to_string() << ")*t2   [checked]\n";
    }
    require(r.matched_through == r.R.order(), "conj f o conj v2 = R fails before the tracked order");
    out << "conj f(conj v2) = R through order " << r.matched_through << "   [checked]\n";
    require(r.jets_match, "recovered jet data differ from the map's own derivatives");
    out << "recovered along (s, 0), compared with direct differentiation through order " << r.jet_order
        << "   [checked]:\n";
    out << "  conj f         = " << r.recovered.fbar.to_string() << "\n";
    out << "  conj f_chi     = " << r.recovered.fbar_chi.to_string() << "\n";
    out << "  conj f_tau     = " << r.recovered.fbar_tau.to_string() << "\n";
    out << "  conj g_chi     = " << r.recovered.gbar_chi.to_string() << "\n";
    out << "  conj g_tau     = " << r.recovered.gbar_tau.to_string() << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"segre-kit: exact Segre mapping, nondegeneracy and finite type analysis of real submanifolds"};
    app.require_subcommand(1);

    AnalyzeArgs aa;
    auto *an = app.add_subcommand("analyze", "full verdict sheet for one or more manifold files");
    an->add_option("files", aa.files, "manifold spec files (.man)")->required()->check(CLI::ExistingFile);
    an->add_option("--order", aa.order, "truncation order T");
    an->add_option("--kmax", aa.k_max, "largest k tried for k-nondegeneracy");
    an->add_option("--depthmax", aa.depth_max, "largest Lie bracket depth");
    an->add_option("-j,--jobs", aa.jobs, "files analyzed concurrently (default: hardware threads)");
    an->add_flag("--json", aa.json, "emit the segre-kit-report/1 JSON document");
    an->add_flag("--timing", aa.timing, "include wall-clock timings (makes output nondeterministic)");

    SegreArgs sa;
    auto *se = app.add_subcommand("segre", "print the Segre variety mapping and iterated Segre mappings");
    se->add_option("file", sa.file, "manifold spec file")->required()->check(CLI::ExistingFile);
    se->add_option("-j", sa.j, "number of iterates (default d+1)");
    se->add_option("--gamma-vars", sa.gamma_vars, "1-based Z indices to solve for, e.g. 1,3")->delimiter(',');
    se->add_option("--order", sa.order, "truncation order T");
    se->add_flag("--json", sa.json, "emit JSON");

    CheckMapArgs ca;
    auto *cm = app.add_subcommand("check-map", "check that a formal map sends M into M'");
    cm->add_option("map", ca.map, "map spec file (.map)")->required()->check(CLI::ExistingFile);
    cm->add_option("source", ca.source, "source manifold")->required()->check(CLI::ExistingFile);
    cm->add_option("target", ca.target, "target manifold")->required()->check(CLI::ExistingFile);
    cm->add_flag("--classify", ca.classify, "invertibility, finiteness and CR transversality");
    cm->add_option("--jets-vs", ca.jets_vs, "compare jets with another map")->check(CLI::ExistingFile);
    cm->add_option("--K", ca.K, "jet order for --jets-vs");
    cm->add_option("--order", ca.order, "truncation order T");
    cm->add_option("--seed", ca.seed, "seed for randq coefficients");
    cm->add_flag("--json", ca.json, "emit JSON");

    JetsArgs ja;
    auto *je = app.add_subcommand("jets", "group maps by K-jet and report determination failures");
    je->add_option("maps", ja.maps, "map spec files")->check(CLI::ExistingFile);
    je->add_option("--source", ja.source, "source manifold")->required()->check(CLI::ExistingFile);
    je->add_option("--target", ja.target, "target manifold (default: source)")->check(CLI::ExistingFile);
    je->add_option("--power-family", ja.power_family,
                   "add identity and (Z1, .., Z_N + Z_N^k) for k = 2 .. this value");
    je->add_option("--K", ja.K, "jet order");
    je->add_option("--order", ja.order, "truncation order T");
    je->add_option("--seed", ja.seed, "seed for randq coefficients");
    je->add_flag("--json", ja.json, "emit JSON");

    DemoArgs da;
    auto *de = app.add_subcommand("demo-lewy", "checked walkthrough of the Lewy hypersurface computation");
    de->add_option("--map", da.map, "identity | dilation:LAMBDA | rotation:U | map file");
    de->add_option("--order", da.order, "truncation order T");
    de->add_option("--seed", da.seed, "seed for randq coefficients");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*an) {
            return cmd_analyze(aa);
        }
        if (*se) {
            return cmd_segre(sa);
        }
        if (*cm) {
            return cmd_check_map(ca);
        }
        if (*je) {
            return cmd_jets(ja);
        }
        if (*de) {
            return cmd_demo_lewy(da);
        }
    } catch (const Fatal &e) {
        std::cerr << "FATAL: " << e.what() << "\n";
        return kExitFatal;
    } catch (const InternalError &e) {
        std::cerr << "FATAL: " << e.what() << "\n";
        return kExitFatal;
    } catch (const TruncationError &e) {
        std::cerr << "error: " << e.what() << " (raise --order)\n";
        return kExitInput;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}
