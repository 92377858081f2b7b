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

#include "segrekit/series.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "segrekit/errors.hpp"

namespace segrekit
{

namespace
{

std::string make_var_name(const VarBlock &b, std::size_t k)
{
    const bool ends_digit = !b.name.empty() && std::isdigit(static_cast<unsigned char>(b.name.back()));
    if (b.arity == 1 && ends_digit) {
        return b.name;
    }
    return ends_digit ? b.name + "_" + std::to_string(k + 1) : b.name + std::to_string(k + 1);
}

} // namespace

// ---------------------------------------------------------------------------
// SeriesContext

SeriesContext::SeriesContext(std::vector<VarBlock> blocks) : blocks_(std::move(blocks))
{
    std::set<std::string> seen;
    std::size_t off = 0;
    for (const auto &b : blocks_) {
        if (b.name.empty() || !seen.insert(b.name).second) {
            throw std::invalid_argument("SeriesContext: block names must be non-empty and distinct ('" + b.name +
                                        "')");
        }
        offsets_.push_back(off);
        for (std::size_t k = 0; k < b.arity; ++k) {
            names_.push_back(make_var_name(b, k));
        }
        off += b.arity;
    }
    std::set<std::string> vars(names_.begin(), names_.end());
    if (vars.size() != names_.size()) {
        throw std::invalid_argument("SeriesContext: variable names collide");
    }
}

std::shared_ptr<const SeriesContext> SeriesContext::make(std::vector<VarBlock> blocks)
{
    return std::make_shared<const SeriesContext>(std::move(blocks));
}

bool SeriesContext::has_block(std::string_view name) const
{
    return std::any_of(blocks_.begin(), blocks_.end(), [&](const VarBlock &b) { return b.name == name; });
}

const VarBlock &SeriesContext::block(std::string_view name) const
{
    for (const auto &b : blocks_) {
        if (b.name == name) {
            return b;
        }
    }
    throw std::out_of_range("SeriesContext: no block '" + std::string(name) + "'");
}

std::size_t SeriesContext::block_offset(std::string_view name) const
{
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
        if (blocks_[k].name == name) {
            return offsets_[k];
        }
    }
    throw std::out_of_range("SeriesContext: no block '" + std::string(name) + "'");
}

std::size_t SeriesContext::index(std::string_view block_name, std::size_t k) const
{
    const auto &b = block(block_name);
    if (k >= b.arity) {
        throw std::out_of_range("SeriesContext: index past block '" + std::string(block_name) + "'");
    }
    return block_offset(block_name) + k;
}

std::optional<std::size_t> SeriesContext::find_var(std::string_view name) const
{
    for (std::size_t k = 0; k < names_.size(); ++k) {
        if (names_[k] == name) {
            return k;
        }
    }
    return std::nullopt;
}

bool same_context(const ContextPtr &a, const ContextPtr &b)
{
    return a == b || (a && b && *a == *b);
}

// ---------------------------------------------------------------------------
// Monomial

Monomial::Monomial(std::vector<Exponent> exps) : exps_(std::move(exps))
{
    for (auto e : exps_) {
        degree_ += e;
    }
}

Monomial Monomial::unit(std::size_t nvars, std::size_t var, Exponent e)
{
    Monomial m(nvars);
    m.set(var, e);
    return m;
}

void Monomial::set(std::size_t k, Exponent e)
{
    degree_ = degree_ - exps_.at(k) + e;
    exps_[k] = e;
}

Monomial operator*(const Monomial &a, const Monomial &b)
{
    Monomial r(a);
    for (std::size_t k = 0; k < r.exps_.size(); ++k) {
        r.exps_[k] = static_cast<Monomial::Exponent>(r.exps_[k] + b.exps_[k]);
    }
    r.degree_ = a.degree_ + b.degree_;
    return r;
}

std::string Monomial::to_string(const SeriesContext &ctx) const
{
    std::string s;
    for (std::size_t k = 0; k < exps_.size(); ++k) {
        if (exps_[k] == 0) {
            continue;
        }
        if (!s.empty()) {
            s += "*";
        }
        s += ctx.var_name(k);
        if (exps_[k] > 1) {
            s += "^" + std::to_string(exps_[k]);
        }
    }
    return s.empty() ? "1" : s;
}

bool GradedLex::operator()(const Monomial &a, const Monomial &b) const
{
    if (a.degree() != b.degree()) {
        return a.degree() < b.degree();
    }
    return a.exponents() > b.exponents();
}

// ---------------------------------------------------------------------------
// TruncatedSeries

TruncatedSeries::TruncatedSeries() : order_(-1)
{
    static const ContextPtr empty = SeriesContext::make({});
    ctx_ = empty;
}

TruncatedSeries::TruncatedSeries(ContextPtr ctx, int order) : ctx_(std::move(ctx)), order_(order)
{
    if (!ctx_) {
        throw std::invalid_argument("TruncatedSeries: null context");
    }
    if (order_ < -1) {
        order_ = -1;
    }
}

TruncatedSeries TruncatedSeries::constant(ContextPtr ctx, int order, const GaussianRational &c)
{
    TruncatedSeries s(std::move(ctx), order);
    if (!c.is_zero() && order >= 0) {
        s.terms_.emplace(Monomial(s.ctx_->size()), c);
    }
    return s;
}

TruncatedSeries TruncatedSeries::variable(ContextPtr ctx, int order, std::size_t var)
{
    TruncatedSeries s(std::move(ctx), order);
    if (var >= s.ctx_->size()) {
        throw std::out_of_range("TruncatedSeries::variable: unknown indeterminate");
    }
    if (order >= 1) {
        s.terms_.emplace(Monomial::unit(s.ctx_->size(), var), GaussianRational(1));
    }
    return s;
}

TruncatedSeries TruncatedSeries::variable(ContextPtr ctx, int order, std::string_view name)
{
    const auto idx = ctx->find_var(name);
    if (!idx) {
        throw std::out_of_range("unknown indeterminate '" + std::string(name) + "'");
    }
    return variable(std::move(ctx), order, *idx);
}

TruncatedSeries TruncatedSeries::from_terms(ContextPtr ctx, int order, const TermMap &terms)
{
    TruncatedSeries s(std::move(ctx), order);
    for (const auto &[m, c] : terms) {
        if (m.size() != s.ctx_->size()) {
            throw ContextMismatch("from_terms: monomial arity does not match context");
        }
        if (static_cast<int>(m.degree()) <= s.order_ && !c.is_zero()) {
            s.terms_.emplace(m, c);
        }
    }
    return s;
}

GaussianRational TruncatedSeries::coeff(const Monomial &m) const
{
    if (static_cast<int>(m.degree()) > order_) {
        throw TruncationError("coefficient of degree " + std::to_string(m.degree()) + " requested beyond order " +
                              std::to_string(order_));
    }
    const auto it = terms_.find(m);
    return it == terms_.end() ? GaussianRational() : it->second;
}

GaussianRational TruncatedSeries::constant_term() const
{
    return coeff(Monomial(ctx_->size()));
}

std::optional<std::pair<Monomial, GaussianRational>> TruncatedSeries::lowest_term() const
{
    if (terms_.empty()) {
        return std::nullopt;
    }
    return *terms_.begin();
}

void TruncatedSeries::check_same(const TruncatedSeries &o, const char *op) const
{
    if (!same_context(ctx_, o.ctx_)) {
        throw ContextMismatch(std::string(op) + ": operands live in different contexts");
    }
}

namespace
{

void drop_above(TermMap &terms, int order)
{
    while (!terms.empty() && static_cast<int>(terms.rbegin()->first.degree()) > order) {
        terms.erase(std::prev(terms.end()));
    }
}

void accumulate(TermMap &terms, const Monomial &m, const GaussianRational &c, bool subtract)
{
    auto [it, inserted] = terms.try_emplace(m);
    if (subtract) {
        it->second -= c;
    } else {
        it->second += c;
    }
    if (it->second.is_zero()) {
        terms.erase(it);
    }
}

} // namespace

TruncatedSeries &TruncatedSeries::operator+=(const TruncatedSeries &o)
{
    check_same(o, "add");
    order_ = std::min(order_, o.order_);
    drop_above(terms_, order_);
    for (const auto &[m, c] : o.terms_) {
        if (static_cast<int>(m.degree()) > order_) {
            break;
        }
        accumulate(terms_, m, c, false);
    }
    return *this;
}

TruncatedSeries &TruncatedSeries::operator-=(const TruncatedSeries &o)
{
    check_same(o, "sub");
    order_ = std::min(order_, o.order_);
    drop_above(terms_, order_);
    for (const auto &[m, c] : o.terms_) {
        if (static_cast<int>(m.degree()) > order_) {
            break;
        }
        accumulate(terms_, m, c, true);
    }
    return *this;
}

TruncatedSeries &TruncatedSeries::operator*=(const GaussianRational &c)
{
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto &[m, v] : terms_) {
        v *= c;
    }
    return *this;
}

TruncatedSeries operator*(const TruncatedSeries &a, const TruncatedSeries &b)
{
    a.check_same(b, "mul");
    TruncatedSeries r(a.ctx_, std::min(a.order_, b.order_));
    const int order = r.order_;
    for (const auto &[ma, ca] : a.terms_) {
        if (static_cast<int>(ma.degree()) > order) {
            break;
        }
        for (const auto &[mb, cb] : b.terms_) {
            // terms are sorted by degree, so the rest of b is out of range too
            if (static_cast<int>(ma.degree() + mb.degree()) > order) {
                break;
            }
            auto [it, inserted] = r.terms_.try_emplace(ma * mb);
            it->second += ca * cb;
        }
    }
    std::erase_if(r.terms_, [](const auto &kv) { return kv.second.is_zero(); });
    return r;
}

TruncatedSeries TruncatedSeries::operator-() const
{
    TruncatedSeries r(*this);
    for (auto &[m, c] : r.terms_) {
        c = -c;
    }
    return r;
}

bool operator==(const TruncatedSeries &a, const TruncatedSeries &b)
{
    return same_context(a.ctx_, b.ctx_) && a.order_ == b.order_ && a.terms_ == b.terms_;
}

std::string TruncatedSeries::to_string() const
{
    std::string s;
    for (const auto &[m, c] : terms_) {
        if (!s.empty()) {
            s += " + ";
        }
        s += "(" + c.to_string() + ")";
        if (m.degree() > 0) {
            s += "*" + m.to_string(*ctx_);
        }
    }
    if (s.empty()) {
        s = "0";
    }
    s += " + O(" + std::to_string(order_ + 1) + ")";
    return s;
}

// ---------------------------------------------------------------------------
// SeriesVector

SeriesVector::SeriesVector(ContextPtr ctx, int order, std::vector<TruncatedSeries> components)
    : ctx_(std::move(ctx)), order_(order), components_(std::move(components))
{
    for (const auto &c : components_) {
        if (!same_context(ctx_, c.context())) {
            throw ContextMismatch("SeriesVector: components live in different contexts");
        }
        order_ = std::min(order_, c.order());
    }
    for (auto &c : components_) {
        if (c.order() > order_) {
            c = truncate(c, order_);
        }
    }
}

SeriesVector::SeriesVector(std::vector<TruncatedSeries> components)
    : order_(std::numeric_limits<int>::max()), components_(std::move(components))
{
    if (components_.empty()) {
        throw std::invalid_argument("SeriesVector: empty component list");
    }
    ctx_ = components_.front().context();
    *this = SeriesVector(ctx_, order_, std::move(components_));
}

bool operator==(const SeriesVector &a, const SeriesVector &b)
{
    return same_context(a.ctx_, b.ctx_) && a.order_ == b.order_ && a.components_ == b.components_;
}

std::string SeriesVector::to_string() const
{
    std::string s = "(";
    for (std::size_t k = 0; k < components_.size(); ++k) {
        if (k > 0) {
            s += ", ";
        }
        s += components_[k].to_string();
    }
    return s + ")";
}

// ---------------------------------------------------------------------------
// Operations

TruncatedSeries pow(const TruncatedSeries &s, unsigned e)
{
    TruncatedSeries result = TruncatedSeries::constant(s.context(), s.order(), 1);
    TruncatedSeries base = s;
    while (e > 0) {
        if (e & 1U) {
            result = result * base;
        }
        e >>= 1U;
        if (e > 0) {
            base = base * base;
        }
    }
    return result;
}

namespace
{

using Entry = std::pair<const Monomial *, const GaussianRational *>;

// Horner scheme in variable `var`, recursing into the remaining variables
// for each coefficient.
TruncatedSeries horner(const std::vector<Entry> &entries, std::size_t var, const SeriesVector &inner,
                       const ContextPtr &ctx, int order)
{
    if (var == inner.size()) {
        GaussianRational sum;
        for (const auto &e : entries) {
            sum += *e.second;
        }
        return TruncatedSeries::constant(ctx, order, sum);
    }
    std::map<unsigned, std::vector<Entry>> buckets;
    for (const auto &e : entries) {
        buckets[(*e.first)[var]].push_back(e);
    }
    if (buckets.size() == 1 && buckets.begin()->first == 0) {
        return horner(entries, var + 1, inner, ctx, order);
    }
    TruncatedSeries acc(ctx, order);
    const unsigned top = buckets.rbegin()->first;
    for (unsigned e = top + 1; e-- > 0;) {
        if (!acc.is_zero()) {
            acc = acc * inner[var];
        }
        if (auto it = buckets.find(e); it != buckets.end()) {
            acc += horner(it->second, var + 1, inner, ctx, order);
        }
    }
    return acc;
}

} // namespace

TruncatedSeries compose(const TruncatedSeries &outer, const SeriesVector &inner)
{
    if (outer.context()->size() != inner.size()) {
        throw ContextMismatch("compose: outer has " + std::to_string(outer.context()->size()) +
                              " indeterminates but " + std::to_string(inner.size()) + " inner series were given");
    }
    for (std::size_t k = 0; k < inner.size(); ++k) {
        if (inner.order() >= 0 && !inner[k].constant_term().is_zero()) {
            throw std::invalid_argument("compose: inner component " + std::to_string(k + 1) +
                                        " has a nonzero constant term");
        }
    }
    const int order = std::min(outer.order(), inner.order());
    std::vector<Entry> entries;
    for (const auto &[m, c] : outer.terms()) {
        // inner series have valuation >= 1, so outer degree bounds result degree
        if (static_cast<int>(m.degree()) > order) {
            break;
        }
        entries.emplace_back(&m, &c);
    }
    if (entries.empty()) {
        return TruncatedSeries(inner.context(), order);
    }
    return horner(entries, 0, inner, inner.context(), order);
}

SeriesVector compose(const SeriesVector &outer, const SeriesVector &inner)
{
    std::vector<TruncatedSeries> out;
    out.reserve(outer.size());
    for (const auto &c : outer) {
        out.push_back(compose(c, inner));
    }
    return SeriesVector(inner.context(), std::min(outer.order(), inner.order()), std::move(out));
}

TruncatedSeries conj_coeffs(const TruncatedSeries &s)
{
    TermMap t;
    for (const auto &[m, c] : s.terms()) {
        t.emplace(m, c.conj());
    }
    return TruncatedSeries::from_terms(s.context(), s.order(), t);
}

SeriesVector conj_coeffs(const SeriesVector &v)
{
    std::vector<TruncatedSeries> out;
    for (const auto &c : v) {
        out.push_back(conj_coeffs(c));
    }
    return SeriesVector(v.context(), v.order(), std::move(out));
}

TruncatedSeries differentiate(const TruncatedSeries &s, std::size_t var)
{
    if (var >= s.context()->size()) {
        throw std::out_of_range("differentiate: unknown indeterminate");
    }
    TermMap t;
    for (const auto &[m, c] : s.terms()) {
        const auto e = m[var];
        if (e == 0) {
            continue;
        }
        Monomial d(m);
        d.set(var, static_cast<Monomial::Exponent>(e - 1));
        t.emplace(d, c * GaussianRational(static_cast<long>(e)));
    }
    return TruncatedSeries::from_terms(s.context(), s.order() - 1, t);
}

TruncatedSeries differentiate(const TruncatedSeries &s, std::string_view var)
{
    const auto idx = s.context()->find_var(var);
    if (!idx) {
        throw std::out_of_range("differentiate: unknown indeterminate '" + std::string(var) + "'");
    }
    return differentiate(s, *idx);
}

TermMap homogeneous_part(const TruncatedSeries &s, unsigned k)
{
    TermMap t;
    for (const auto &[m, c] : s.terms()) {
        if (m.degree() == k) {
            t.emplace(m, c);
        } else if (m.degree() > k) {
            break;
        }
    }
    return t;
}

TruncatedSeries divide_by_unit(const TruncatedSeries &num, const TruncatedSeries &den)
{
    if (!same_context(num.context(), den.context())) {
        throw ContextMismatch("divide_by_unit: operands live in different contexts");
    }
    const int order = std::min(num.order(), den.order());
    if (order < 0) {
        return TruncatedSeries(num.context(), order);
    }
    const GaussianRational c0 = den.constant_term();
    if (c0.is_zero()) {
        throw std::domain_error("divide_by_unit: denominator vanishes at the origin");
    }
    std::vector<TermMap> den_parts(order + 1);
    for (const auto &[m, c] : den.terms()) {
        if (static_cast<int>(m.degree()) > order) {
            break;
        }
        den_parts[m.degree()].emplace(m, c);
    }
    std::vector<TermMap> q(order + 1);
    for (int k = 0; k <= order; ++k) {
        TermMap acc = homogeneous_part(num, static_cast<unsigned>(k));
        for (int j = 1; j <= k; ++j) {
            for (const auto &[md, cd] : den_parts[j]) {
                for (const auto &[mq, cq] : q[k - j]) {
                    accumulate(acc, md * mq, cd * cq, true);
                }
            }
        }
        for (auto &[m, c] : acc) {
            c /= c0;
        }
        q[k] = std::move(acc);
    }
    TermMap all;
    for (auto &part : q) {
        all.merge(part);
    }
    return TruncatedSeries::from_terms(num.context(), order, all);
}

TruncatedSeries divide_by_variable(const TruncatedSeries &s, std::size_t var)
{
    TermMap t;
    for (const auto &[m, c] : s.terms()) {
        if (m[var] == 0) {
            throw std::domain_error("divide_by_variable: term " + m.to_string(*s.context()) + " is not divisible by " +
                                    s.context()->var_name(var));
        }
        Monomial d(m);
        d.set(var, static_cast<Monomial::Exponent>(m[var] - 1));
        t.emplace(d, c);
    }
    return TruncatedSeries::from_terms(s.context(), s.order() - 1, t);
}

TruncatedSeries jet(const TruncatedSeries &s, int k)
{
    if (k > s.order()) {
        throw TruncationError("jet of order " + std::to_string(k) + " requested from a series known through order " +
                              std::to_string(s.order()));
    }
    return truncate(s, k);
}

bool jets_equal(const TruncatedSeries &a, const TruncatedSeries &b, int k)
{
    if (!same_context(a.context(), b.context())) {
        throw ContextMismatch("jets_equal: operands live in different contexts");
    }
    return jet(a, k).terms() == jet(b, k).terms();
}

TruncatedSeries truncate(const TruncatedSeries &s, int k)
{
    if (k >= s.order()) {
        return s;
    }
    return TruncatedSeries::from_terms(s.context(), k, s.terms());
}

SeriesVector truncate(const SeriesVector &v, int k)
{
    std::vector<TruncatedSeries> out;
    for (const auto &c : v) {
        out.push_back(truncate(c, k));
    }
    return SeriesVector(v.context(), std::min(k, v.order()), std::move(out));
}

TruncatedSeries embed(const TruncatedSeries &s, const ContextPtr &target)
{
    const auto &src = *s.context();
    std::vector<std::size_t> map(src.size());
    for (std::size_t k = 0; k < src.size(); ++k) {
        const auto idx = target->find_var(src.var_name(k));
        if (!idx) {
            throw ContextMismatch("embed: target context lacks indeterminate '" + src.var_name(k) + "'");
        }
        map[k] = *idx;
    }
    TermMap t;
    for (const auto &[m, c] : s.terms()) {
        Monomial n(target->size());
        for (std::size_t k = 0; k < src.size(); ++k) {
            if (m[k] != 0) {
                n.set(map[k], m[k]);
            }
        }
        t.emplace(n, c);
    }
    return TruncatedSeries::from_terms(target, s.order(), t);
}

SeriesVector embed(const SeriesVector &v, const ContextPtr &target)
{
    std::vector<TruncatedSeries> out;
    for (const auto &c : v) {
        out.push_back(embed(c, target));
    }
    return SeriesVector(target, v.order(), std::move(out));
}

TruncatedSeries swap_blocks(const TruncatedSeries &s, std::string_view a, std::string_view b)
{
    const auto &ctx = *s.context();
    const auto n = ctx.block(a).arity;
    if (ctx.block(b).arity != n) {
        throw ContextMismatch("swap_blocks: blocks differ in arity");
    }
    const auto oa = ctx.block_offset(a);
    const auto ob = ctx.block_offset(b);
    TermMap t;
    for (const auto &[m, c] : s.terms()) {
        Monomial r(m);
        for (std::size_t k = 0; k < n; ++k) {
            r.set(oa + k, m[ob + k]);
            r.set(ob + k, m[oa + k]);
        }
        t.emplace(r, c);
    }
    return TruncatedSeries::from_terms(s.context(), s.order(), t);
}

TruncatedSeries set_zero(const TruncatedSeries &s, std::size_t var)
{
    TermMap t;
    for (const auto &[m, c] : s.terms()) {
        if (m[var] == 0) {
            t.emplace(m, c);
        }
    }
    return TruncatedSeries::from_terms(s.context(), s.order(), t);
}

GaussianRational evaluate(const TruncatedSeries &s, std::span<const GaussianRational> point)
{
    if (point.size() != s.context()->size()) {
        throw ContextMismatch("evaluate: point dimension does not match context");
    }
    GaussianRational sum;
    for (const auto &[m, c] : s.terms()) {
        GaussianRational v = c;
        for (std::size_t k = 0; k < m.size(); ++k) {
            for (unsigned e = 0; e < m[k]; ++e) {
                v *= point[k];
            }
        }
        sum += v;
    }
    return sum;
}

} // namespace segrekit
