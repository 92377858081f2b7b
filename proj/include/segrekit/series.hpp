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

#ifndef SEGREKIT_SERIES_HPP
#define SEGREKIT_SERIES_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "segrekit/gaussian_rational.hpp"

// Truncated multivariate formal power series with exact Gaussian-rational
// coefficients.
//
// A series carries a truncation order T: every monomial of total degree <= T
// is known exactly, nothing above T is known. Operations propagate T
// conservatively and refuse reads beyond it. Order -1 is the empty state
// (nothing known), reached e.g. by differentiating an order-0 series.

namespace segrekit
{

struct VarBlock {
    std::string name;
    std::size_t arity = 0;

    friend bool operator==(const VarBlock &, const VarBlock &) = default;
};

/// Ordered list of named indeterminate blocks. Global variable index k
/// runs over the concatenation of the blocks.
class SeriesContext
{
  public:
    explicit SeriesContext(std::vector<VarBlock> blocks);

    static std::shared_ptr<const SeriesContext> make(std::vector<VarBlock> blocks);

    const std::vector<VarBlock> &blocks() const { return blocks_; }
    std::size_t size() const { return names_.size(); }

    bool has_block(std::string_view name) const;
    const VarBlock &block(std::string_view name) const;
    std::size_t block_offset(std::string_view name) const;
    /// Global index of the k-th (0-based) variable of a block.
    std::size_t index(std::string_view block, std::size_t k) const;

    const std::string &var_name(std::size_t idx) const { return names_.at(idx); }
    std::optional<std::size_t> find_var(std::string_view name) const;

    friend bool operator==(const SeriesContext &a, const SeriesContext &b) { return a.blocks_ == b.blocks_; }

  private:
    std::vector<VarBlock> blocks_;
    std::vector<std::size_t> offsets_;
    std::vector<std::string> names_;
};

using ContextPtr = std::shared_ptr<const SeriesContext>;

bool same_context(const ContextPtr &a, const ContextPtr &b);

class Monomial
{
  public:
    using Exponent = std::uint16_t;

    Monomial() = default;
    explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
    explicit Monomial(std::vector<Exponent> exps);

    static Monomial unit(std::size_t nvars, std::size_t var, Exponent e = 1);

    std::size_t size() const { return exps_.size(); }
    unsigned degree() const { return degree_; }
    Exponent operator[](std::size_t k) const { return exps_[k]; }
    const std::vector<Exponent> &exponents() const { return exps_; }

    void set(std::size_t k, Exponent e);

    friend Monomial operator*(const Monomial &a, const Monomial &b);
    friend bool operator==(const Monomial &a, const Monomial &b) { return a.exps_ == b.exps_; }

    std::string to_string(const SeriesContext &ctx) const;

  private:
    std::vector<Exponent> exps_;
    unsigned degree_ = 0;
};

/// Graded lexicographic order: lower total degree first, ties broken by
/// lexicographically larger exponent vector first (x1^2 < x1*x2 < x2^2).
struct GradedLex {
    bool operator()(const Monomial &a, const Monomial &b) const;
};

using TermMap = std::map<Monomial, GaussianRational, GradedLex>;

class TruncatedSeries
{
  public:
    /// Empty series (order -1) over the empty context.
    TruncatedSeries();
    TruncatedSeries(ContextPtr ctx, int order);

    static TruncatedSeries constant(ContextPtr ctx, int order, const GaussianRational &c);
    static TruncatedSeries variable(ContextPtr ctx, int order, std::size_t var);
    static TruncatedSeries variable(ContextPtr ctx, int order, std::string_view name);
    /// Drops zero coefficients and terms above the order.
    static TruncatedSeries from_terms(ContextPtr ctx, int order, const TermMap &terms);

    const ContextPtr &context() const { return ctx_; }
    int order() const { return order_; }
    const TermMap &terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    /// Throws TruncationError when m lies above the order.
    GaussianRational coeff(const Monomial &m) const;
    GaussianRational constant_term() const;

    /// True when no nonzero term is known (says nothing beyond the order).
    bool is_zero() const { return terms_.empty(); }
    /// Lowest-degree nonzero term in graded-lex order.
    std::optional<std::pair<Monomial, GaussianRational>> lowest_term() const;

    TruncatedSeries &operator+=(const TruncatedSeries &o);
    TruncatedSeries &operator-=(const TruncatedSeries &o);
    TruncatedSeries &operator*=(const GaussianRational &c);

    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries &b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries &b) { return a -= b; }
    friend TruncatedSeries operator*(const TruncatedSeries &a, const TruncatedSeries &b);
    friend TruncatedSeries operator*(TruncatedSeries a, const GaussianRational &c) { return a *= c; }
    friend TruncatedSeries operator*(const GaussianRational &c, TruncatedSeries a) { return a *= c; }
    TruncatedSeries operator-() const;

    friend bool operator==(const TruncatedSeries &a, const TruncatedSeries &b);

    /// Canonical text: graded-lex terms "(a/b+c/d*i)*x^2*y" joined by " + ",
    /// followed by " + O(T+1)".
    std::string to_string() const;

  private:
    void check_same(const TruncatedSeries &o, const char *op) const;

    ContextPtr ctx_;
    int order_;
    TermMap terms_;
};

/// Fixed-length list of series sharing one context; the common order is
/// the minimum of the component orders.
class SeriesVector
{
  public:
    SeriesVector() : order_(-1) {}
    SeriesVector(ContextPtr ctx, int order) : ctx_(std::move(ctx)), order_(order) {}
    /// Orders above the common minimum are lowered to it.
    SeriesVector(ContextPtr ctx, int order, std::vector<TruncatedSeries> components);
    /// Non-empty list; context and order taken from the components.
    explicit SeriesVector(std::vector<TruncatedSeries> components);

    const ContextPtr &context() const { return ctx_; }
    int order() const { return order_; }
    std::size_t size() const { return components_.size(); }
    const TruncatedSeries &operator[](std::size_t k) const { return components_[k]; }
    const std::vector<TruncatedSeries> &components() const { return components_; }
    auto begin() const { return components_.begin(); }
    auto end() const { return components_.end(); }

    friend bool operator==(const SeriesVector &a, const SeriesVector &b);

    std::string to_string() const;

  private:
    ContextPtr ctx_;
    int order_;
    std::vector<TruncatedSeries> components_;
};

TruncatedSeries pow(const TruncatedSeries &s, unsigned e);

/// outer(inner_1, ..., inner_m): outer lives in m variables, inner holds m
/// series with zero constant term. Horner evaluation variable by variable.
TruncatedSeries compose(const TruncatedSeries &outer, const SeriesVector &inner);
SeriesVector compose(const SeriesVector &outer, const SeriesVector &inner);

TruncatedSeries conj_coeffs(const TruncatedSeries &s);
SeriesVector conj_coeffs(const SeriesVector &v);

TruncatedSeries differentiate(const TruncatedSeries &s, std::size_t var);
TruncatedSeries differentiate(const TruncatedSeries &s, std::string_view var);

/// num / den for den(0) != 0; throws std::domain_error otherwise.
TruncatedSeries divide_by_unit(const TruncatedSeries &num, const TruncatedSeries &den);

/// Exact division by a single variable; every term must contain it.
TruncatedSeries divide_by_variable(const TruncatedSeries &s, std::size_t var);

/// Terms of total degree <= k; throws TruncationError when k > order.
TruncatedSeries jet(const TruncatedSeries &s, int k);
bool jets_equal(const TruncatedSeries &a, const TruncatedSeries &b, int k);

/// Lowers the order to k (no-op when k >= order).
TruncatedSeries truncate(const TruncatedSeries &s, int k);
SeriesVector truncate(const SeriesVector &v, int k);

/// Re-expresses s in another context, matching variables by name.
TruncatedSeries embed(const TruncatedSeries &s, const ContextPtr &target);
SeriesVector embed(const SeriesVector &v, const ContextPtr &target);

/// Exchanges two blocks of equal arity (exponent permutation only).
TruncatedSeries swap_blocks(const TruncatedSeries &s, std::string_view a, std::string_view b);

/// Sets one variable to zero.
TruncatedSeries set_zero(const TruncatedSeries &s, std::size_t var);

/// Sum of all known terms at a point. Meaningful as a function value only
/// when s is a polynomial of degree <= order.
GaussianRational evaluate(const TruncatedSeries &s, std::span<const GaussianRational> point);

/// Homogeneous component of degree k.
TermMap homogeneous_part(const TruncatedSeries &s, unsigned k);

} // namespace segrekit

#endif
