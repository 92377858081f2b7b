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

#ifndef SEGREKIT_MAPS_HPP
#define SEGREKIT_MAPS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "segrekit/parser.hpp"
#include "segrekit/segre.hpp"

// Truncated formal maps F: (C^N, 0) -> (C^N', 0) between germs of generic
// submanifolds: membership checks, classification, jet comparison, and the
// reflection computation on the Lewy hypersurface.

namespace segrekit
{

struct FormalMap {
    std::string name;
    std::size_t N = 0;       // source dimension
    ContextPtr ctx;          // block Z (N)
    SeriesVector components; // N' series, F(0) = 0

    std::size_t target_dimension() const { return components.size(); }
    int order() const { return components.order(); }

    /// Throws ValidationError unless F(0) = 0.
    static FormalMap from_components(std::string name, SeriesVector components);
    static FormalMap from_spec(const MapSpec &spec, int order, std::uint64_t seed);
    static FormalMap identity(std::size_t N, int order);
    /// Z -> A Z.
    static FormalMap linear(const Matrix &A, int order);
};

ContextPtr map_context(std::size_t N);

/// (G o F)(Z) = G(F(Z)).
FormalMap compose_maps(const FormalMap &G, const FormalMap &F);
/// dF(0), N' x N.
Matrix jacobian_at_zero(const FormalMap &F);

struct SendsInto {
    bool pass = false;
    int order = 0;
    // lowest offending term, when failing
    std::size_t component = 0;
    std::string monomial;
    GaussianRational coefficient;
    unsigned degree = 0;
    SeriesVector residual;
};

/// Checks rho'(F(gamma(zeta, t)), conj F(zeta)) = 0 on M's canonical Segre
/// variety mapping gamma.
SendsInto sends_into(const FormalMap &F, const DefiningSystem &M, const DefiningSystem &Mp);

struct MapClassification {
    enum class Finite { Finite, NotCertified, NotApplicable };
    bool invertible = false;
    Finite finite = Finite::NotApplicable;
    std::optional<std::size_t> codimension; // when Finite
    std::vector<std::size_t> quotient_dimensions; // dim C[[Z]]/(I + m^k), k = 1, 2, ...
    bool cr_transversal = false;
};

std::string to_string(MapClassification::Finite f);

/// Requires sends_into to pass; throws ValidationError otherwise.
MapClassification classify(const FormalMap &F, const DefiningSystem &M, const DefiningSystem &Mp);

/// Throws TruncationError when K exceeds either map's order.
bool jets_agree(const FormalMap &F, const FormalMap &G, int K);

struct ReflectionJets {
    // along t -> (t, 0), as series in one variable s1
    TruncatedSeries fbar;
    TruncatedSeries fbar_chi;
    TruncatedSeries fbar_tau;
    TruncatedSeries gbar_chi;
    TruncatedSeries gbar_tau;
};

struct ReflectionResult {
    TruncatedSeries R;          // in (t1, t2)
    int matched_through = -1;   // fbar o conj(v^2) = R through this order
    bool identity_vanishes = false; // rho(F(v^3), conj F(conj v^2)) = 0
    bool g_vanishes_on_axis = false;
    SeriesVector identity_residual;
    ReflectionJets recovered;
    ReflectionJets direct;      // read off from F itself
    bool jets_match = false;
    int jet_order = -1;
};

struct ReflectionOptions {
    /// Skip the sends_into precondition (used to compare maps that only
    /// share a jet with a map of the hypersurface).
    bool require_sends_into = true;
};

/// lewy must be the Lewy hypersurface rho = w - tau - 2i z chi.
ReflectionResult lewy_reflection(const FormalMap &F, const DefiningSystem &lewy,
                                 const ReflectionOptions &opts = {});

/// (z, w) -> (lambda z, lambda^2 w), lambda real.
FormalMap lewy_dilation(const Rational &lambda, int order);
/// (z, w) -> (u z, w), |u| = 1.
FormalMap lewy_rotation(const GaussianRational &u, int order);

struct DeterminationReport {
    int K = 0;
    std::vector<std::vector<std::size_t>> classes; // indices into the family
    std::vector<std::size_t> failing_classes;      // classes with >= 2 distinct maps
    std::vector<bool> sends_into;                  // precondition per map
    bool determination_fails() const { return !failing_classes.empty(); }
};

DeterminationReport determination_experiment(const DefiningSystem &M, const DefiningSystem &Mp,
                                             const std::vector<FormalMap> &family, int K);

} // namespace segrekit

#endif
