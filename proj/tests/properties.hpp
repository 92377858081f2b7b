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

// Seeded property suite for the truncated series ring, shared by the unit
// tests and the acceptance runner.

#ifndef SEGREKIT_TESTS_PROPERTIES_HPP
#define SEGREKIT_TESTS_PROPERTIES_HPP

#include <functional>
#include <string>

#include "oracle.hpp"
#include "segrekit/parser.hpp"

namespace properties
{

struct Tally {
    std::size_t instances = 0;
    std::size_t checks = 0;
    std::map<std::string, std::size_t> failures; // property -> count

    bool ok() const { return failures.empty(); }
};

inline Tally run_series_properties(std::size_t instances, int T, std::uint64_t seed)
{
    using namespace segrekit;
    using oracle::random_series;
    Tally tally;
    std::mt19937_64 rng(seed);
    const ContextPtr ctx = SeriesContext::make({{"x", 3}});
    const ContextPtr cplx = SeriesContext::make({{"Z", 2}, {"zeta", 2}});
    const TruncatedSeries one = TruncatedSeries::constant(ctx, T, 1);

    auto check = [&](bool ok, const char *name) {
        ++tally.checks;
        if (!ok) {
            ++tally.failures[name];
        }
    };

    for (std::size_t it = 0; it < instances; ++it) {
        ++tally.instances;
        const TruncatedSeries a = random_series(ctx, T, rng, 6, 4, false);
        const TruncatedSeries b = random_series(ctx, T, rng, 6, 4, false);
        const TruncatedSeries c = random_series(ctx, T, rng, 6, 4, false);

        // ring laws
        check((a + b) + c == a + (b + c), "addition is associative");
        check(a + b == b + a, "addition is commutative");
        check(a * b == b * a, "multiplication is commutative");
        check((a * b) * c == a * (b * c), "multiplication is associative");
        check(a * (b + c) == a * b + a * c, "distributive law");
        check((a - a).is_zero() && a * one == a, "identities");
        check(oracle::agrees(oracle::from_series(a) * oracle::from_series(b), a * b), "product matches oracle");

        // composition is a ring homomorphism
        const SeriesVector h(ctx, T,
                             {random_series(ctx, T, rng, 3, 3, true), random_series(ctx, T, rng, 3, 3, true),
                              random_series(ctx, T, rng, 3, 3, true)});
        const TruncatedSeries ah = compose(a, h);
        const TruncatedSeries bh = compose(b, h);
        check(compose(a * b, h) == ah * bh, "composition respects products");
        check(compose(a + b, h) == ah + bh, "composition respects sums");
        std::vector<oracle::Poly> hp;
        for (const auto &s : h) {
            hp.push_back(oracle::from_series(s));
        }
        check(oracle::agrees(oracle::from_series(a).substitute(hp, T), ah), "composition matches oracle");

        // conjugation
        check(conj_coeffs(conj_coeffs(a)) == a, "conjugation is an involution");
        check(conj_coeffs(a * b) == conj_coeffs(a) * conj_coeffs(b), "conjugation is multiplicative");
        const TruncatedSeries w = random_series(cplx, T, rng, 6, 4, false);
        check(conj_swap(conj_swap(w)) == w, "complexified conjugation is an involution");

        // quotient by a unit
        TruncatedSeries u = random_series(ctx, T, rng, 4, 3, true) + TruncatedSeries::constant(ctx, T, GaussianRational(1 + static_cast<long>(rng() % 3), static_cast<long>(rng() % 3)));
        const TruncatedSeries q = divide_by_unit(a, u);
        check(q * u == a, "quotient times divisor recovers the dividend");
        check(divide_by_unit(a * u, u) == a, "quotient of a product");

        // Leibniz rule
        for (std::size_t k = 0; k < 3; ++k) {
            const TruncatedSeries lhs = differentiate(a * b, k);
            const TruncatedSeries rhs = differentiate(a, k) * b + a * differentiate(b, k);
            check(jets_equal(lhs, rhs, T - 1), "product rule");
            check(oracle::agrees(oracle::from_series(a).diff(k), differentiate(a, k)), "derivative matches oracle");
        }
    }
    return tally;
}

} // namespace properties

#endif
