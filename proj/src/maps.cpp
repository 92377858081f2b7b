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

#include "segrekit/maps.hpp"

#include <algorithm>

#include "segrekit/errors.hpp"

namespace segrekit
{

ContextPtr map_context(std::size_t N)
{
    return SeriesContext::make({{"Z", N}});
}

FormalMap FormalMap::from_components(std::string name, SeriesVector components)
{
    if (components.size() == 0) {
        throw ValidationError("map has no components");
    }
    const auto &ctx = components.context();
    if (ctx->blocks().size() != 1 || ctx->blocks()[0].name != "Z") {
        throw ContextMismatch("map components must live in a single Z block");
    }
    for (std::size_t j = 0; j < components.size(); ++j) {
        if (components.order() >= 0 && !components[j].constant_term().is_zero()) {
            throw ValidationError("map component " + std::to_string(j + 1) + " does not vanish at 0 (F(0) = " +
                                  components[j].constant_term().to_string() + ")");
        }
    }
    FormalMap F;
    F.name = std::move(name);
    F.N = ctx->size();
    F.ctx = ctx;
    F.components = std::move(components);
    return F;
}

FormalMap FormalMap::from_spec(const MapSpec &spec, int order, std::uint64_t seed)
{
    const ContextPtr ctx = map_context(spec.N);
    std::vector<TruncatedSeries> comps;
    for (const auto &e : spec.exprs) {
        comps.push_back(evaluate_holomorphic(*e, ctx, order, seed));
    }
    return from_components(spec.name, SeriesVector(ctx, order, std::move(comps)));
}

FormalMap FormalMap::identity(std::size_t N, int order)
{
    return linear(Matrix::identity(N), order);
}

FormalMap FormalMap::linear(const Matrix &A, int order)
{
    const ContextPtr ctx = map_context(A.cols());
    std::vector<TruncatedSeries> comps;
    for (std::size_t r = 0; r < A.rows(); ++r) {
        TruncatedSeries s(ctx, order);
        for (std::size_t c = 0; c < A.cols(); ++c) {
            if (!A(r, c).is_zero()) {
                s += TruncatedSeries::variable(ctx, order, c) * A(r, c);
            }
        }
        comps.push_back(std::move(s));
    }
    return from_components(A.rows() == A.cols() && A == Matrix::identity(A.rows()) ? "identity" : "linear",
                           SeriesVector(ctx, order, std::move(comps)));
}

FormalMap compose_maps(const FormalMap &G, const FormalMap &F)
{
    if (G.N != F.target_dimension()) {
        throw ContextMismatch("compose_maps: dimensions do not match");
    }
    return FormalMap::from_components(G.name + "o" + F.name, compose(G.components, F.components));
}

Matrix jacobian_at_zero(const FormalMap &F)
{
    Matrix J(F.target_dimension(), F.N);
    for (std::size_t r = 0; r < J.rows(); ++r) {
        for (std::size_t c = 0; c < J.cols(); ++c) {
            J(r, c) = F.components[r].coeff(Monomial::unit(F.N, c));
        }
    }
    return J;
}

// ---------------------------------------------------------------------------
// Sends into

SendsInto sends_into(const FormalMap &F, const DefiningSystem &M, const DefiningSystem &Mp)
{
    if (F.N != M.N || F.target_dimension() != Mp.N) {
        throw ValidationError("dimension mismatch: map is C^" + std::to_string(F.N) + " -> C^" +
                              std::to_string(F.target_dimension()) + ", manifolds live in C^" + std::to_string(M.N) +
                              " and C^" + std::to_string(Mp.N));
    }
    const SegreMapping g = solve_gamma(M);
    const int order = std::min(F.order(), g.gamma.order());
    std::vector<TruncatedSeries> zeta;
    for (std::size_t k = 0; k < M.N; ++k) {
        zeta.push_back(TruncatedSeries::variable(g.ctx, order, k));
    }
    const SeriesVector Z = compose(F.components, g.gamma);
    const SeriesVector Zeta = compose(conj_coeffs(F.components), SeriesVector(g.ctx, order, zeta));

    SendsInto res;
    res.residual = substitute(Mp, Z, Zeta);
    res.order = res.residual.order();
    res.pass = true;
    std::optional<std::pair<Monomial, GaussianRational>> worst;
    for (std::size_t j = 0; j < res.residual.size(); ++j) {
        const auto low = res.residual[j].lowest_term();
        if (!low) {
            continue;
        }
        if (!worst || GradedLex{}(low->first, worst->first)) {
            worst = low;
            res.component = j;
        }
        res.pass = false;
    }
    if (worst) {
        res.monomial = worst->first.to_string(*g.ctx);
        res.coefficient = worst->second;
        res.degree = worst->first.degree();
    }
    return res;
}

// ---------------------------------------------------------------------------
// Classification

namespace
{

void monomials_below(std::size_t nvars, unsigned k, std::vector<Monomial> &out)
{
    // graded-lex enumeration of all monomials of degree < k
    for (unsigned deg = 0; deg < k; ++deg) {
        std::vector<Monomial> level;
        std::vector<Monomial::Exponent> cur(nvars, 0);
        auto rec = [&](auto &&self, std::size_t pos, unsigned left) -> void {
            if (pos + 1 == nvars) {
                cur[pos] = static_cast<Monomial::Exponent>(left);
                level.emplace_back(cur);
                return;
            }
            for (unsigned e = left + 1; e-- > 0;) {
                cur[pos] = static_cast<Monomial::Exponent>(e);
                self(self, pos + 1, left - e);
            }
        };
        rec(rec, 0, deg);
        out.insert(out.end(), level.begin(), level.end());
    }
}

// dim C[[Z]] / (I + m^k) with I generated by the components of F.
std::size_t quotient_dimension(const FormalMap &F, unsigned k)
{
    std::vector<Monomial> monos;
    monomials_below(F.N, k, monos);
    std::map<Monomial, std::size_t, GradedLex> col;
    for (std::size_t c = 0; c < monos.size(); ++c) {
        col.emplace(monos[c], c);
    }
    std::vector<SparseRow> rows;
    for (const auto &f : F.components) {
        for (const auto &m : monos) {
            SparseRow row;
            for (const auto &[fm, c] : f.terms()) {
                if (fm.degree() + m.degree() >= k) {
                    break;
                }
                row.emplace(col.at(fm * m), c);
            }
            if (!row.empty()) {
                rows.push_back(std::move(row));
            }
        }
    }
    return monos.size() - sparse_rank(std::move(rows));
}

constexpr unsigned kQuotientDegreeCap = 8;

} // namespace

std::string to_string(MapClassification::Finite f)
{
    switch (f) {
    case MapClassification::Finite::Finite:
        return "FINITE";
    case MapClassification::Finite::NotCertified:
        return "NOT_CERTIFIED";
    case MapClassification::Finite::NotApplicable:
        return "NOT_APPLICABLE";
    }
    return "?";
}

MapClassification classify(const FormalMap &F, const DefiningSystem &M, const DefiningSystem &Mp)
{
    const SendsInto check = sends_into(F, M, Mp);
    if (!check.pass) {
        throw ValidationError("classify: the map does not send M into M' (offending term " + check.monomial +
                              " in component " + std::to_string(check.component + 1) + ")");
    }
    MapClassification out;
    const Matrix J = jacobian_at_zero(F);
    out.invertible = F.N == F.target_dimension() && !determinant(J).is_zero();

    if (F.N == F.target_dimension()) {
        out.finite = MapClassification::Finite::NotCertified;
        const unsigned cap = static_cast<unsigned>(std::min<int>(F.order() + 1, kQuotientDegreeCap));
        for (unsigned k = 1; k <= cap; ++k) {
            out.quotient_dimensions.push_back(quotient_dimension(F, k));
            const auto &q = out.quotient_dimensions;
            if (q.size() >= 2 && q[q.size() - 1] == q[q.size() - 2]) {
                // m^{k-1} lies in I + m^k, hence in I by Nakayama.
                out.finite = MapClassification::Finite::Finite;
                out.codimension = q.back();
                break;
            }
        }
    }

    // Tangent space of the complexified M at 0: rho_Z(0) a + rho_zeta(0) b = 0.
    const std::size_t N = M.N;
    Matrix T(M.d, 2 * N);
    for (std::size_t j = 0; j < M.d; ++j) {
        for (std::size_t k = 0; k < 2 * N; ++k) {
            T(j, k) = M.rho[j].coeff(Monomial::unit(2 * N, k));
        }
    }
    const std::size_t Np = Mp.N;
    Matrix GZ(Mp.d, Np);
    Matrix Gzeta(Mp.d, Np);
    for (std::size_t j = 0; j < Mp.d; ++j) {
        for (std::size_t k = 0; k < Np; ++k) {
            GZ(j, k) = Mp.rho[j].coeff(Monomial::unit(2 * Np, k));
            Gzeta(j, k) = Mp.rho[j].coeff(Monomial::unit(2 * Np, Np + k));
        }
    }
    const Matrix AZ = GZ * J;
    const Matrix Azeta = Gzeta * J.conj();
    for (const Vector &v : kernel(T)) {
        const Vector a(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(N));
        const Vector b(v.begin() + static_cast<std::ptrdiff_t>(N), v.end());
        const Vector x = AZ * a;
        const Vector y = Azeta * b;
        auto nonzero = [](const Vector &w) {
            return std::any_of(w.begin(), w.end(), [](const GaussianRational &c) { return !c.is_zero(); });
        };
        if (nonzero(x) || nonzero(y)) {
            out.cr_transversal = true;
            break;
        }
    }
    return out;
}

bool jets_agree(const FormalMap &F, const FormalMap &G, int K)
{
    if (F.N != G.N || F.target_dimension() != G.target_dimension()) {
        throw ValidationError("jets_agree: maps have different source or target");
    }
    for (std::size_t j = 0; j < F.target_dimension(); ++j) {
        if (!jets_equal(F.components[j], embed(G.components[j], F.ctx), K)) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Reflection on the Lewy hypersurface
//
// With rho = w - tau - 2i z chi, v^3 = (t3, 2i(t2 t3 - t1 t2)) and
// conj v^2 = (t2, -2i t1 t2), substituting (v^3, conj v^2) into the map
// identity gives
//
//   g(v^3) - gbar(conj v^2) - 2i f(v^3) fbar(conj v^2) = 0.
//
// t1 = t2 = 0 forces g(z, 0) = 0. Differentiating in t3 and putting t3 = t1:
//
//   fbar(conj v^2) = (g_z + 2i t2 g_w)(t1, 0) / (2i (f_z + 2i t2 f_w)(t1, 0)) =: R.
//
// Along (t, 0): fbar = R(0, t), fbar_chi = dR(0,t)/dt,
// fbar_tau = d_{t1}R(0, t) / (-2i t), gbar_chi = 0, gbar_tau = f_z(0) fbar / t.

namespace
{

void require_lewy(const DefiningSystem &sys)
{
    if (sys.N != 2 || sys.d != 1) {
        throw ValidationError("lewy_reflection: source must be the Lewy hypersurface in C^2");
    }
    const auto &ctx = sys.ctx;
    const int T = sys.order();
    const TruncatedSeries expected = TruncatedSeries::variable(ctx, T, 1) - TruncatedSeries::variable(ctx, T, 3) -
                                     TruncatedSeries::variable(ctx, T, 0) * TruncatedSeries::variable(ctx, T, 2) *
                                         GaussianRational(0, 2);
    if (!(sys.rho[0] == expected)) {
        throw ValidationError("lewy_reflection: defining function is not w - tau - 2i z chi");
    }
}

// h(Z1 := a, Z2 := b) for series a, b in a target context.
TruncatedSeries at(const TruncatedSeries &h, const TruncatedSeries &a, const TruncatedSeries &b)
{
    return compose(h, SeriesVector(a.context(), std::min(a.order(), b.order()), {a, b}));
}

bool equal_through(const TruncatedSeries &a, const TruncatedSeries &b, int k)
{
    return jets_equal(truncate(a, k), truncate(b, k), k);
}

} // namespace

ReflectionResult lewy_reflection(const FormalMap &F, const DefiningSystem &lewy, const ReflectionOptions &opts)
{
    require_lewy(lewy);
    if (F.N != 2 || F.target_dimension() != 2) {
        throw ValidationError("lewy_reflection: map must be C^2 -> C^2");
    }
    if (determinant(jacobian_at_zero(F)).is_zero()) {
        throw ValidationError("lewy_reflection: map is not invertible at 0");
    }
    const TruncatedSeries &f = F.components[0];
    const TruncatedSeries &g = F.components[1];
    const GaussianRational fz0 = f.coeff(Monomial::unit(2, 0));
    if (fz0.is_zero()) {
        throw ValidationError("lewy_reflection: f_z(0) = 0, the quotient is undefined");
    }
    if (opts.require_sends_into && !sends_into(F, lewy, lewy).pass) {
        throw ValidationError("lewy_reflection: the map does not send the Lewy hypersurface into itself");
    }

    ReflectionResult res;
    const int T = std::min(F.order(), lewy.order());
    const SegreMapping gamma = solve_gamma(lewy);
    const auto chain = iterate_segre_chain(gamma, 3);
    const ContextPtr ctx3 = chain[2].ctx;
    const ContextPtr ctx2 = chain[1].ctx;

    // (a) the identity on (v^3, conj v^2)
    const SeriesVector Fbar = conj_coeffs(F.components);
    const SeriesVector v3 = truncate(chain[2].v, T);
    const SeriesVector v2bar3 = embed(conj_coeffs(truncate(chain[1].v, T)), ctx3);
    res.identity_residual = substitute(lewy, compose(F.components, v3), compose(Fbar, v2bar3));
    res.identity_vanishes = std::all_of(res.identity_residual.begin(), res.identity_residual.end(),
                                        [](const TruncatedSeries &s) { return s.is_zero(); });

    // (b) g(z, 0) = 0
    res.g_vanishes_on_axis = set_zero(g, 1).is_zero();

    // (c) R(t1, t2)
    const TruncatedSeries t1 = TruncatedSeries::variable(ctx2, T, 0);
    const TruncatedSeries t2 = TruncatedSeries::variable(ctx2, T, 1);
    const TruncatedSeries zero2(ctx2, T);
    const GaussianRational two_i(0, 2);
    const TruncatedSeries gz = at(differentiate(g, 0), t1, zero2);
    const TruncatedSeries gw = at(differentiate(g, 1), t1, zero2);
    const TruncatedSeries fz = at(differentiate(f, 0), t1, zero2);
    const TruncatedSeries fw = at(differentiate(f, 1), t1, zero2);
    const TruncatedSeries num = gz + two_i * t2 * gw;
    const TruncatedSeries den = two_i * (fz + two_i * t2 * fw);
    res.R = divide_by_unit(num, den);
    const TruncatedSeries lhs = compose(Fbar[0], conj_coeffs(truncate(chain[1].v, T)));
    const int k = std::min(lhs.order(), res.R.order());
    res.matched_through = equal_through(lhs, res.R, k) ? k : -1;

    // (d) first-jet data along (t, 0)
    const ContextPtr ctx1 = SeriesContext::make({{"s", 1}});
    const TruncatedSeries s = TruncatedSeries::variable(ctx1, T, 0);
    const TruncatedSeries zero1(ctx1, T);
    auto along = [&](const TruncatedSeries &h) { return at(h, zero1, s); }; // h(0, s) on (t1, t2)
    ReflectionJets &rec = res.recovered;
    rec.fbar = along(res.R);
    rec.fbar_chi = differentiate(rec.fbar, 0);
    rec.fbar_tau = divide_by_variable(along(differentiate(res.R, 0)), 0) * (GaussianRational(1) / -two_i);
    rec.gbar_chi = TruncatedSeries(ctx1, rec.fbar.order() - 1);
    rec.gbar_tau = divide_by_variable(rec.fbar, 0) * fz0;

    ReflectionJets &dir = res.direct;
    auto on_axis = [&](const TruncatedSeries &h) { return at(h, s, zero1); }; // h(s, 0) on (chi, tau)
    dir.fbar = on_axis(Fbar[0]);
    dir.fbar_chi = on_axis(differentiate(Fbar[0], 0));
    dir.fbar_tau = on_axis(differentiate(Fbar[0], 1));
    dir.gbar_chi = on_axis(differentiate(Fbar[1], 0));
    dir.gbar_tau = on_axis(differentiate(Fbar[1], 1));

    res.jet_order = std::min({rec.fbar.order(), rec.fbar_chi.order(), rec.fbar_tau.order(), rec.gbar_chi.order(),
                              rec.gbar_tau.order()});
    const int jo = res.jet_order;
    res.jets_match = equal_through(rec.fbar, dir.fbar, jo) && equal_through(rec.fbar_chi, dir.fbar_chi, jo) &&
                     equal_through(rec.fbar_tau, dir.fbar_tau, jo) &&
                     equal_through(rec.gbar_chi, dir.gbar_chi, jo) && equal_through(rec.gbar_tau, dir.gbar_tau, jo);
    return res;
}

FormalMap lewy_dilation(const Rational &lambda, int order)
{
    Matrix A(2, 2);
    A(0, 0) = GaussianRational(lambda);
    A(1, 1) = GaussianRational(lambda * lambda);
    FormalMap F = FormalMap::linear(A, order);
    F.name = "dilation:" + lambda.get_str();
    return F;
}

FormalMap lewy_rotation(const GaussianRational &u, int order)
{
    if (u.norm() != 1) {
        throw ValidationError("rotation factor must have modulus 1");
    }
    Matrix A(2, 2);
    A(0, 0) = u;
    A(1, 1) = 1;
    FormalMap F = FormalMap::linear(A, order);
    F.name = "rotation:" + u.to_string();
    return F;
}

// ---------------------------------------------------------------------------
// Determination experiment

DeterminationReport determination_experiment(const DefiningSystem &M, const DefiningSystem &Mp,
                                             const std::vector<FormalMap> &family, int K)
{
    DeterminationReport rep;
    rep.K = K;
    for (const auto &F : family) {
        rep.sends_into.push_back(sends_into(F, M, Mp).pass);
    }
    for (std::size_t i = 0; i < family.size(); ++i) {
        bool placed = false;
        for (auto &cls : rep.classes) {
            if (jets_agree(family[cls.front()], family[i], K)) {
                cls.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) {
            rep.classes.push_back({i});
        }
    }
    for (std::size_t c = 0; c < rep.classes.size(); ++c) {
        const auto &cls = rep.classes[c];
        bool distinct = false;
        for (std::size_t a = 1; a < cls.size() && !distinct; ++a) {
            const FormalMap &F = family[cls.front()];
            const FormalMap &G = family[cls[a]];
            distinct = !jets_agree(F, G, std::min(F.order(), G.order()));
        }
        if (distinct) {
            rep.failing_classes.push_back(c);
        }
    }
    return rep;
}

} // namespace segrekit
