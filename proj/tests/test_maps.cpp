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

#include "doctest.h"

#include "oracle.hpp"
#include "support.hpp"
#include "segrekit/errors.hpp"
#include "segrekit/maps.hpp"

using namespace segrekit;
using oracle::Poly;

namespace
{

const GaussianRational I = GaussianRational::i();

std::string corpus(const std::string &name)
{
    return std::string(SEGREKIT_CORPUS) + "/" + name;
}

DefiningSystem load(const std::string &name, std::optional<int> order = std::nullopt)
{
    ComplexifyOptions o;
    o.order = order;
    return complexify(load_manifold(corpus(name)), o);
}

FormalMap load_formal(const std::string &name, int order, std::uint64_t seed = 1)
{
    return FormalMap::from_spec(load_map(corpus(name)), order, seed);
}

/// Z -> (Z1, .., Z_{N-1}, Z_N + Z_N^k)
FormalMap power_map(std::size_t N, unsigned k, int order)
{
    const ContextPtr ctx = map_context(N);
    std::vector<TruncatedSeries> c;
    for (std::size_t i = 0; i < N; ++i) {
        c.push_back(TruncatedSeries::variable(ctx, order, i));
    }
    c.back() += pow(c.back(), k);
    return FormalMap::from_components("power" + std::to_string(k), SeriesVector(ctx, order, c));
}

/// conj(f)(t2, -2i t1 t2): the left side of the reflection identity, by
/// plain expansion.
Poly fbar_on_conj_v2(const FormalMap &F)
{
    const Poly fbar = oracle::from_series(F.components[0]).conj();
    const Poly t1 = Poly::var(2, 0);
    const Poly t2 = Poly::var(2, 1);
    return fbar.substitute({t2, (GaussianRational(-2) * I) * (t1 * t2)});
}

} // namespace

TEST_SUITE("maps")
{

TEST_CASE("identity sends every corpus manifold into itself")
{
    for (const char *name : {"lewy.man", "plane.man", "hole.man", "quadric3.man", "z4.man", "z6.man", "product.man",
                             "realline.man", "totallyreal.man", "codim2.man", "codim2-mixed.man", "lewy-shifted.man",
                             "lewy-tilted.man", "cubic.man"}) {
        INFO(std::string(name));
        const DefiningSystem M = load(name);
        CHECK(sends_into(FormalMap::identity(M.N, M.order()), M, M).pass);
    }
}

TEST_CASE("hole example self-map (q, q, 0)")
{
    const DefiningSystem M = load("hole.man");
    const FormalMap F = load_formal("hole-selfmap.map", M.order());
    REQUIRE(sends_into(F, M, M).pass);
    const MapClassification c = classify(F, M, M);
    CHECK_FALSE(c.invertible);
    CHECK(c.finite == MapClassification::Finite::NotCertified);
    CHECK_FALSE(c.cr_transversal);
    // The ideal (Z1) leaves C[[Z2, Z3]]: k(k+1)/2 monomials of degree < k.
    REQUIRE(c.quotient_dimensions.size() >= 4);
    for (std::size_t k = 1; k <= c.quotient_dimensions.size(); ++k) {
        CHECK(c.quotient_dimensions[k - 1] == k * (k + 1) / 2);
    }
    // dF(0) has image span{(1,1,0)}, inside the complex tangent {Z3 = 0}.
    const Matrix J = jacobian_at_zero(F);
    CHECK(J(0, 0) == J(1, 0));
    CHECK(J(2, 0).is_zero());
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
        CHECK(sends_into(load_formal("hole-selfmap-random.map", M.order(), seed), M, M).pass);
    }
}

TEST_CASE("(z, w + z) does not send the Lewy hypersurface into itself")
{
    const DefiningSystem M = load("lewy.man");
    const SendsInto s = sends_into(load_formal("lewy-badmap.map", M.order()), M, M);
    CHECK_FALSE(s.pass);
    CHECK(s.degree == 1);
    CHECK(s.component == 0);
    CHECK(s.monomial == "zeta1");
    CHECK(s.coefficient == GaussianRational(-1));
    CHECK_THROWS_AS(classify(load_formal("lewy-badmap.map", M.order()), M, M), ValidationError);
}

TEST_CASE("the embedding (Z1, .., Z_{N-1}, q, q, Z_N) is CR transversal")
{
    const DefiningSystem lewy = load("lewy.man");
    const DefiningSystem t2 = load("embed-target2.man");
    for (const char *map : {"embed2.map", "embed2-zero.map"}) {
        INFO(std::string(map));
        const FormalMap F = load_formal(map, lewy.order());
        REQUIRE(sends_into(F, lewy, t2).pass);
        const MapClassification c = classify(F, lewy, t2);
        CHECK(c.cr_transversal);
        CHECK(c.finite == MapClassification::Finite::NotApplicable);
    }
    const DefiningSystem q3 = load("quadric3.man");
    const DefiningSystem t3 = load("embed-target3.man");
    const FormalMap F = load_formal("embed3.map", q3.order());
    REQUIRE(sends_into(F, q3, t3).pass);
    CHECK(classify(F, q3, t3).cr_transversal);
    CHECK_THROWS_AS(sends_into(F, lewy, t3), ValidationError);
}

TEST_CASE("shear of the product along Z3")
{
    const DefiningSystem M = load("product.man");
    for (std::uint64_t seed : {1, 9, 17}) {
        const FormalMap F = load_formal("product-shear.map", M.order(), seed);
        REQUIRE(sends_into(F, M, M).pass);
        const MapClassification c = classify(F, M, M);
        CHECK(c.invertible);
        CHECK(c.finite == MapClassification::Finite::Finite);
        CHECK(c.codimension == 1u);
    }
}

TEST_CASE("invertibility is unchanged by linear changes of coordinates")
{
    const Matrix A = Matrix::from_rows({{1, I, 0}, {0, 2, 0}, {1, 0, 1}}, 3);
    const Matrix B = Matrix::from_rows({{0, 1, 0}, {1, 0, 0}, {0, 3, I}}, 3);
    for (const char *map : {"hole-selfmap.map", "product-shear.map"}) {
        const FormalMap F = load_formal(map, 6);
        const FormalMap moved = compose_maps(FormalMap::linear(A, 6), compose_maps(F, FormalMap::linear(B, 6)));
        CHECK(determinant(jacobian_at_zero(F)).is_zero() == determinant(jacobian_at_zero(moved)).is_zero());
    }
    const DefiningSystem M = load("product.man");
    CHECK(classify(load_formal("product-shear.map", M.order()), M, M).invertible);
    CHECK_FALSE(classify(FormalMap::from_components("fold", SeriesVector(map_context(3), M.order(),
                                                   {TruncatedSeries::variable(map_context(3), M.order(), 0),
                                                    TruncatedSeries::variable(map_context(3), M.order(), 1),
                                                    TruncatedSeries(map_context(3), M.order())})),
                         M, M)
                     .invertible);
}

TEST_CASE("composites of maps into the Lewy hypersurface")
{
    const DefiningSystem M = load("lewy.man");
    const FormalMap H = load_formal("lewy-heisenberg.map", M.order());
    REQUIRE(sends_into(H, M, M).pass);
    const FormalMap HH = compose_maps(H, H);
    CHECK(sends_into(HH, M, M).pass);
    CHECK(sends_into(compose_maps(lewy_dilation(3, M.order()), H), M, M).pass);
    const MapClassification c = classify(H, M, M);
    CHECK(c.invertible);
    CHECK(c.cr_transversal);
}

TEST_CASE("jet agreement")
{
    const FormalMap id = FormalMap::identity(3, 8);
    for (unsigned K = 2; K <= 6; ++K) {
        const FormalMap P = power_map(3, K, 8);
        CHECK(jets_agree(P, id, static_cast<int>(K) - 1));
        CHECK_FALSE(jets_agree(P, id, static_cast<int>(K)));
        CHECK(jets_agree(P, P, 8));
    }
    CHECK_THROWS_AS(jets_agree(id, id, 9), TruncationError);
    const FormalMap H = load_formal("lewy-heisenberg.map", 8);
    CHECK(jets_agree(H, FormalMap::identity(2, 8), 0));
    CHECK_FALSE(jets_agree(H, FormalMap::identity(2, 8), 1));
}

TEST_CASE("reflection for builtin maps")
{
    const DefiningSystem M = load("lewy.man");
    const int T = M.order();
    struct Case {
        FormalMap F;
        GaussianRational r; // R = r t2
    };
    const GaussianRational u(Rational(3, 5), Rational(4, 5));
    const std::vector<Case> cases = {{FormalMap::identity(2, T), 1},
                                     {lewy_dilation(2, T), 2},
                                     {lewy_dilation(Rational(-1, 3), T), GaussianRational(Rational(-1, 3))},
                                     {lewy_rotation(u, T), u.conj()}};
    for (const auto &c : cases) {
        const ReflectionResult r = lewy_reflection(c.F, M);
        const TruncatedSeries expected = c.r * TruncatedSeries::variable(r.R.context(), r.R.order(), "t2");
        CHECK(r.R == expected);
        CHECK(r.identity_vanishes);
        CHECK(r.g_vanishes_on_axis);
        CHECK(r.matched_through == r.R.order());
        CHECK(oracle::agrees(fbar_on_conj_v2(c.F), r.R));
        CHECK(r.jets_match);
        CHECK(jets_equal(r.recovered.fbar, r.direct.fbar, r.recovered.fbar.order()));
        CHECK(jets_equal(r.recovered.fbar_tau, r.direct.fbar_tau, r.recovered.fbar_tau.order()));
    }
    // identity: conj f(s, 0) = s
    const ReflectionResult id = lewy_reflection(FormalMap::identity(2, T), M);
    CHECK(id.recovered.fbar.to_string().rfind("(1+0*i)*s1 + O(", 0) == 0);
}

TEST_CASE("reflection for the Heisenberg isotropy map")
{
    const DefiningSystem M = load("lewy.man");
    const FormalMap H = load_formal("lewy-heisenberg.map", M.order());
    const ReflectionResult r = lewy_reflection(H, M);
    CHECK(r.identity_vanishes);
    CHECK(r.g_vanishes_on_axis);
    CHECK(r.jets_match);
    CHECK(oracle::agrees(fbar_on_conj_v2(H), r.R));
}

TEST_CASE("maps with equal 2-jets give the same R(0, t2) and jet data")
{
    const DefiningSystem M = load("lewy.man");
    const int T = M.order();
    const FormalMap H = load_formal("lewy-heisenberg.map", T);
    // keep the 2-jet, change everything above it
    const ContextPtr ctx = H.ctx;
    const TruncatedSeries z = TruncatedSeries::variable(ctx, T, 0);
    const TruncatedSeries w = TruncatedSeries::variable(ctx, T, 1);
    const FormalMap G = FormalMap::from_components(
        "perturbed", SeriesVector(ctx, T, {H.components[0] + GaussianRational(5) * pow(z, 3) - I * z * w * w,
                                           H.components[1] + GaussianRational(Rational(2, 7)) * pow(w, 3)}));
    REQUIRE(jets_agree(H, G, 2));
    ReflectionOptions opts;
    opts.require_sends_into = false;
    const ReflectionResult a = lewy_reflection(H, M, opts);
    const ReflectionResult b = lewy_reflection(G, M, opts);
    const std::size_t t1 = *a.R.context()->find_var("t1");
    const int o = std::min(a.R.order(), b.R.order());
    CHECK(jets_equal(set_zero(a.R, t1), set_zero(b.R, t1), o));
    const int jo = std::min(a.recovered.fbar_tau.order(), b.recovered.fbar_tau.order());
    CHECK(jets_equal(a.recovered.fbar, b.recovered.fbar, jo));
    CHECK(jets_equal(a.recovered.fbar_chi, b.recovered.fbar_chi, jo));
    CHECK(jets_equal(a.recovered.fbar_tau, b.recovered.fbar_tau, jo));
    CHECK(jets_equal(a.recovered.gbar_tau, b.recovered.gbar_tau, jo));
    // a genuinely different 2-jet changes R(0, t2)
    const ReflectionResult d = lewy_reflection(lewy_dilation(2, T), M);
    CHECK_FALSE(jets_equal(set_zero(a.R, t1), set_zero(d.R, t1), 1));
}

TEST_CASE("reflection preconditions")
{
    const DefiningSystem M = load("lewy.man");
    const ContextPtr ctx = map_context(2);
    const FormalMap zero = FormalMap::from_components(
        "zero", SeriesVector(ctx, M.order(), {TruncatedSeries(ctx, M.order()), TruncatedSeries(ctx, M.order())}));
    CHECK_THROWS_AS(lewy_reflection(zero, M), ValidationError);
    CHECK_THROWS_AS(lewy_reflection(load_formal("lewy-badmap.map", M.order()), M), ValidationError);
    CHECK_THROWS_AS(lewy_rotation(GaussianRational(1, 1), 8), ValidationError);
    CHECK_THROWS_AS(lewy_reflection(FormalMap::identity(3, 8), load("hole.man")), ValidationError);
}

TEST_CASE("jet determination experiments")
{
    const DefiningSystem M = load("product.man");
    const int T = M.order();
    std::vector<FormalMap> family{FormalMap::identity(3, T)};
    for (unsigned k = 2; k <= static_cast<unsigned>(T); ++k) {
        family.push_back(power_map(3, k, T));
    }
    for (int K = 1; K < T; ++K) {
        const DeterminationReport rep = determination_experiment(M, M, family, K);
        CHECK(rep.determination_fails());
        for (bool s : rep.sends_into) {
            CHECK(s);
        }
    }
    const DeterminationReport at2 = determination_experiment(M, M, family, 2);
    CHECK(at2.failing_classes.size() == 1);

    const DefiningSystem L = load("lewy.man");
    const std::vector<FormalMap> rotations{lewy_rotation(GaussianRational(Rational(3, 5), Rational(4, 5)), 8),
                                           lewy_rotation(GaussianRational(Rational(5, 13), Rational(12, 13)), 8),
                                           FormalMap::identity(2, 8)};
    const DeterminationReport rot = determination_experiment(L, L, rotations, 1);
    CHECK_FALSE(rot.determination_fails());
    CHECK(rot.classes.size() == 3);

    const std::vector<FormalMap> twins{FormalMap::identity(2, 8), FormalMap::identity(2, 8)};
    const DeterminationReport tw = determination_experiment(L, L, twins, 3);
    CHECK(tw.classes.size() == 1);
    CHECK_FALSE(tw.determination_fails());
}

} // TEST_SUITE
