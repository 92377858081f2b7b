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

#include "segrekit/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "segrekit/errors.hpp"

namespace segrekit
{

namespace
{

// ---------------------------------------------------------------------------
// Lexer

struct Token {
    enum class Kind { Ident, Number, Symbol, End, Eos } kind = Kind::End;
    std::string text;
    std::size_t offset = 0; // byte offset into the document
    int line = 1;
    int column = 1;
};

std::vector<Token> tokenize(std::string_view text)
{
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t k = 0;
    auto push = [&](Token::Kind kind, std::size_t begin, std::size_t len, int c) {
        out.push_back({kind, std::string(text.substr(begin, len)), begin, line, c});
    };
    while (k < text.size()) {
        const char ch = text[k];
        if (ch == '#') {
            while (k < text.size() && text[k] != '\n') {
                ++k;
            }
            continue;
        }
        if (ch == '\n' || ch == ';') {
            push(Token::Kind::Eos, k, 1, col);
            ++k;
            if (ch == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++k;
            ++col;
            continue;
        }
        const std::size_t begin = k;
        const int c0 = col;
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            while (k < text.size() && (std::isalnum(static_cast<unsigned char>(text[k])) || text[k] == '_')) {
                ++k;
            }
            col += static_cast<int>(k - begin);
            push(Token::Kind::Ident, begin, k - begin, c0);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
            bool dot = false;
            while (k < text.size() && (std::isdigit(static_cast<unsigned char>(text[k])) || (text[k] == '.' && !dot))) {
                dot = dot || text[k] == '.';
                ++k;
            }
            col += static_cast<int>(k - begin);
            if (k - begin == 1 && ch == '.') {
                throw ParseError("stray '.'", line, c0);
            }
            push(Token::Kind::Number, begin, k - begin, c0);
            continue;
        }
        if (std::string_view("+-*/^(),=:").find(ch) != std::string_view::npos) {
            ++k;
            ++col;
            push(Token::Kind::Symbol, begin, 1, c0);
            continue;
        }
        throw ParseError(std::string("unexpected character '") + ch + "'", line, c0);
    }
    out.push_back({Token::Kind::Eos, "", text.size(), line, col});
    out.push_back({Token::Kind::End, "", text.size(), line, col});
    return out;
}

Rational parse_decimal(const std::string &s)
{
    const auto dot = s.find('.');
    if (dot == std::string::npos) {
        return Rational(s);
    }
    const std::string ip = s.substr(0, dot);
    const std::string fp = s.substr(dot + 1);
    mpz_class num(ip.empty() ? "0" : ip);
    mpz_class den = 1;
    for (char c : fp) {
        num = num * 10 + (c - '0');
        den *= 10;
    }
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Parses an identifier of the form <prefix><positive int>; returns the
// 0-based index.
std::optional<std::size_t> indexed_name(const std::string &id, std::string_view prefix)
{
    if (id.size() <= prefix.size() || id.compare(0, prefix.size(), prefix) != 0) {
        return std::nullopt;
    }
    const std::string rest = id.substr(prefix.size());
    if (!std::all_of(rest.begin(), rest.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) ||
        rest[0] == '0' || rest.size() > 6) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(std::stoul(rest)) - 1;
}

// ---------------------------------------------------------------------------
// Recursive-descent expression parser over one statement's tokens.

enum class Dialect { Manifold, Map };

class ExprParser
{
  public:
    ExprParser(const std::vector<Token> &toks, std::size_t pos, Dialect dialect)
        : toks_(toks), pos_(pos), dialect_(dialect)
    {
    }

    ExprPtr parse_expr()
    {
        ExprPtr lhs = parse_term();
        while (is_sym("+") || is_sym("-")) {
            const Token op = take();
            ExprPtr rhs = parse_term();
            lhs = binary(op.text == "+" ? Expr::Kind::Add : Expr::Kind::Sub, lhs, rhs, op);
        }
        return lhs;
    }

    std::size_t pos() const { return pos_; }
    const Token &peek() const { return toks_[pos_]; }
    bool is_sym(std::string_view s) const { return peek().kind == Token::Kind::Symbol && peek().text == s; }
    bool at_eos() const { return peek().kind == Token::Kind::Eos || peek().kind == Token::Kind::End; }
    Token take() { return toks_[pos_++]; }

    void expect(std::string_view s)
    {
        if (!is_sym(s)) {
            fail("expected '" + std::string(s) + "'" + found());
        }
        ++pos_;
    }

    [[noreturn]] void fail(const std::string &msg) const { throw ParseError(msg, peek().line, peek().column); }

  private:
    std::string found() const
    {
        if (at_eos()) {
            return " but reached end of statement";
        }
        return " but found '" + peek().text + "'";
    }

    static ExprPtr binary(Expr::Kind k, ExprPtr a, ExprPtr b, const Token &at)
    {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->args = {std::move(a), std::move(b)};
        e->line = at.line;
        e->column = at.column;
        return e;
    }

    ExprPtr parse_term()
    {
        ExprPtr lhs = parse_unary();
        while (is_sym("*") || is_sym("/")) {
            const Token op = take();
            ExprPtr rhs = parse_unary();
            if (op.text == "/" && !rhs->is_constant()) {
                throw ParseError("division is only allowed by constant expressions", rhs->line, rhs->column);
            }
            lhs = binary(op.text == "*" ? Expr::Kind::Mul : Expr::Kind::Div, lhs, rhs, op);
        }
        return lhs;
    }

    ExprPtr parse_unary()
    {
        if (is_sym("-") || is_sym("+")) {
            const Token op = take();
            ExprPtr inner = parse_unary();
            if (op.text == "+") {
                return inner;
            }
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::Neg;
            e->args = {inner};
            e->line = op.line;
            e->column = op.column;
            return e;
        }
        return parse_power();
    }

    ExprPtr parse_power()
    {
        ExprPtr base = parse_primary();
        if (is_sym("^")) {
            const Token op = take();
            if (peek().kind != Token::Kind::Number || peek().text.find('.') != std::string::npos) {
                fail("exponent must be a nonnegative integer literal" + found());
            }
            const Token num = take();
            if (num.text.size() > 4) {
                throw ParseError("exponent too large", num.line, num.column);
            }
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::Pow;
            e->exponent = static_cast<unsigned>(std::stoul(num.text));
            e->args = {base};
            e->line = op.line;
            e->column = op.column;
            if (is_sym("^")) {
                fail("chained exponents need parentheses");
            }
            return e;
        }
        return base;
    }

    ExprPtr parse_primary()
    {
        const Token tok = peek();
        auto e = std::make_shared<Expr>();
        e->line = tok.line;
        e->column = tok.column;
        if (tok.kind == Token::Kind::Number) {
            ++pos_;
            e->kind = Expr::Kind::Number;
            e->value = GaussianRational(parse_decimal(tok.text));
            return e;
        }
        if (is_sym("(")) {
            ++pos_;
            ExprPtr inner = parse_expr();
            expect(")");
            return inner;
        }
        if (tok.kind != Token::Kind::Ident) {
            fail("expected an expression" + found());
        }
        ++pos_;
        const std::string &id = tok.text;
        if (id == "i") {
            e->kind = Expr::Kind::Number;
            e->value = GaussianRational::i();
            return e;
        }
        if (auto k = indexed_name(id, "Z")) {
            e->kind = Expr::Kind::Z;
            e->index = *k;
            return e;
        }
        if (auto k = indexed_name(id, "zeta")) {
            if (dialect_ == Dialect::Map) {
                throw ParseError("map components must be holomorphic: '" + id + "' is not allowed", tok.line,
                                 tok.column);
            }
            e->kind = Expr::Kind::Zeta;
            e->index = *k;
            return e;
        }
        static const std::pair<const char *, Expr::Kind> unary_fns[] = {
            {"conj", Expr::Kind::Conj}, {"Re", Expr::Kind::Re}, {"Im", Expr::Kind::Im}, {"abs2", Expr::Kind::Abs2}};
        for (const auto &[name, kind] : unary_fns) {
            if (id == name) {
                if (dialect_ == Dialect::Map) {
                    throw ParseError("map components must be holomorphic: '" + id + "' is not allowed", tok.line,
                                     tok.column);
                }
                expect("(");
                e->kind = kind;
                e->args = {parse_expr()};
                expect(")");
                return e;
            }
        }
        if (id == "randq") {
            if (dialect_ == Dialect::Manifold) {
                throw ParseError("randq(...) is only available in map files", tok.line, tok.column);
            }
            return parse_randq(e);
        }
        throw ParseError("unknown identifier '" + id + "'", tok.line, tok.column);
    }

    unsigned parse_small_int()
    {
        if (peek().kind != Token::Kind::Number || peek().text.find('.') != std::string::npos ||
            peek().text.size() > 3) {
            fail("expected a small nonnegative integer" + found());
        }
        return static_cast<unsigned>(std::stoul(take().text));
    }

    ExprPtr parse_randq(std::shared_ptr<Expr> e)
    {
        e->kind = Expr::Kind::RandQ;
        expect("(");
        if (peek().kind != Token::Kind::Ident) {
            fail("randq: expected a tag identifier" + found());
        }
        e->tag = take().text;
        expect(",");
        e->min_degree = parse_small_int();
        expect(",");
        e->max_degree = parse_small_int();
        if (e->min_degree < 1 || e->max_degree < e->min_degree || e->max_degree > 32) {
            throw ParseError("randq: need 1 <= mindeg <= maxdeg <= 32", e->line, e->column);
        }
        while (is_sym(",")) {
            ++pos_;
            const Token v = peek();
            auto k = v.kind == Token::Kind::Ident ? indexed_name(v.text, "Z") : std::nullopt;
            if (!k) {
                fail("randq: expected a variable Z<k>" + found());
            }
            ++pos_;
            e->vars.push_back(*k);
        }
        expect(")");
        return e;
    }

    const std::vector<Token> &toks_;
    std::size_t pos_;
    Dialect dialect_;
};

// ---------------------------------------------------------------------------
// Document structure

struct Statement {
    std::size_t begin; // first token
    std::size_t end;   // Eos token
};

std::vector<Statement> split_statements(const std::vector<Token> &toks)
{
    std::vector<Statement> out;
    std::size_t begin = 0;
    for (std::size_t k = 0; k < toks.size(); ++k) {
        if (toks[k].kind == Token::Kind::Eos) {
            if (k > begin) {
                out.push_back({begin, k});
            }
            begin = k + 1;
        }
    }
    return out;
}

struct RawDocument {
    std::optional<std::string> name;
    std::optional<long> N, d, order;
    std::optional<std::vector<ExprPtr>> point;
    std::vector<ExprPtr> exprs;
    bool section_seen = false;
    int section_line = 1;
};

long parse_header_int(ExprParser &p, const std::string &key)
{
    if (p.peek().kind != Token::Kind::Number || p.peek().text.find('.') != std::string::npos ||
        p.peek().text.size() > 6) {
        p.fail(key + " must be a nonnegative integer");
    }
    return std::stol(p.take().text);
}

RawDocument parse_document(std::string_view text, Dialect dialect)
{
    const std::vector<Token> toks = tokenize(text);
    RawDocument doc;
    const char *section = dialect == Dialect::Manifold ? "rho" : "F";
    for (const Statement &st : split_statements(toks)) {
        ExprParser p(toks, st.begin, dialect);
        const Token &first = toks[st.begin];
        const bool is_key = first.kind == Token::Kind::Ident && st.end > st.begin + 1 &&
                            toks[st.begin + 1].kind == Token::Kind::Symbol;
        if (is_key && toks[st.begin + 1].text == "=") {
            const std::string key = first.text;
            p.take();
            p.take();
            if (key == "name") {
                const std::size_t a = p.peek().offset;
                const std::size_t b = toks[st.end].offset;
                std::string v(text.substr(a, b - a));
                while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) {
                    v.pop_back();
                }
                if (v.empty()) {
                    throw ParseError("empty name", first.line, first.column);
                }
                doc.name = v;
                continue;
            }
            if (key == "N") {
                doc.N = parse_header_int(p, key);
            } else if (key == "d" && dialect == Dialect::Manifold) {
                doc.d = parse_header_int(p, key);
            } else if (key == "order") {
                doc.order = parse_header_int(p, key);
            } else if (key == "p" && dialect == Dialect::Manifold) {
                std::vector<ExprPtr> coords;
                if (p.peek().kind == Token::Kind::Number && p.peek().text == "0" &&
                    toks[p.pos() + 1].kind == Token::Kind::Eos) {
                    p.take();
                } else {
                    p.expect("(");
                    coords.push_back(p.parse_expr());
                    while (p.is_sym(",")) {
                        p.take();
                        coords.push_back(p.parse_expr());
                    }
                    p.expect(")");
                    for (const auto &c : coords) {
                        if (!c->is_constant()) {
                            throw ParseError("base point coordinates must be constants", c->line, c->column);
                        }
                    }
                }
                doc.point = std::move(coords);
            } else {
                throw ParseError("unknown header '" + key + "'", first.line, first.column);
            }
            if (!p.at_eos()) {
                p.fail("unexpected trailing input after header");
            }
            continue;
        }
        if (is_key && toks[st.begin + 1].text == ":" && first.text == section) {
            if (doc.section_seen) {
                throw ParseError(std::string("duplicate '") + section + ":' section", first.line, first.column);
            }
            doc.section_seen = true;
            doc.section_line = first.line;
            p.take();
            p.take();
            if (p.at_eos()) {
                continue;
            }
        } else if (!doc.section_seen) {
            throw ParseError(std::string("expected a header or '") + section + ":'", first.line, first.column);
        }
        doc.exprs.push_back(p.parse_expr());
        if (!p.at_eos()) {
            p.fail("unexpected '" + p.peek().text + "' after expression");
        }
    }
    if (!doc.section_seen) {
        throw ParseError(std::string("missing '") + section + ":' section", toks.back().line, 1);
    }
    if (doc.exprs.empty()) {
        throw ParseError("no expressions given", doc.section_line, 1);
    }
    return doc;
}

// First node whose index is out of range, if any.
const Expr *index_violation(const Expr &e, std::size_t N)
{
    if ((e.kind == Expr::Kind::Z || e.kind == Expr::Kind::Zeta) && e.index >= N) {
        return &e;
    }
    if (e.kind == Expr::Kind::RandQ) {
        for (auto v : e.vars) {
            if (v >= N) {
                return &e;
            }
        }
    }
    for (const auto &a : e.args) {
        if (const Expr *bad = index_violation(*a, N)) {
            return bad;
        }
    }
    return nullptr;
}

void check_indices(const std::vector<ExprPtr> &exprs, std::size_t N)
{
    for (const auto &e : exprs) {
        if (const Expr *bad = index_violation(*e, N)) {
            throw ParseError("variable index out of range for N=" + std::to_string(N), bad->line, bad->column);
        }
    }
}

std::string read_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------
// Evaluation

struct EvalEnv {
    ContextPtr ctx;
    int order = 0;
    std::size_t zoff = 0;
    std::size_t zarity = 0;
    std::optional<std::size_t> zetaoff;
    const Vector *shift = nullptr;
    std::uint64_t seed = 0;
};

std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// All exponent vectors over `vars` of total degree `deg`, lexicographically
// largest first.
void monomials_of_degree(std::size_t nv, unsigned deg, std::vector<unsigned> &cur, std::size_t k,
                         std::vector<std::vector<unsigned>> &out)
{
    if (k + 1 == nv) {
        cur[k] = deg;
        out.push_back(cur);
        return;
    }
    for (unsigned e = deg + 1; e-- > 0;) {
        cur[k] = e;
        monomials_of_degree(nv, deg - e, cur, k + 1, out);
    }
}

Rational draw_rational(std::mt19937_64 &rng)
{
    const long num = static_cast<long>(rng() % 19) - 9;
    const long den = static_cast<long>(rng() % 5) + 1;
    Rational r(num, den);
    r.canonicalize();
    return r;
}

TruncatedSeries eval_randq(const Expr &e, const EvalEnv &env)
{
    std::vector<std::size_t> vars = e.vars;
    if (vars.empty()) {
        for (std::size_t k = 0; k < env.zarity; ++k) {
            vars.push_back(k);
        }
    }
    std::mt19937_64 rng(env.seed ^ fnv1a(e.tag));
    TermMap terms;
    std::vector<unsigned> cur(vars.size());
    for (unsigned deg = e.min_degree; deg <= e.max_degree; ++deg) {
        std::vector<std::vector<unsigned>> monos;
        monomials_of_degree(vars.size(), deg, cur, 0, monos);
        for (const auto &exps : monos) {
            Rational re = draw_rational(rng);
            Rational im = draw_rational(rng);
            Monomial m(env.ctx->size());
            for (std::size_t k = 0; k < vars.size(); ++k) {
                if (exps[k] != 0) {
                    m.set(env.zoff + vars[k], static_cast<Monomial::Exponent>(exps[k]));
                }
            }
            terms.emplace(m, GaussianRational(re, im));
        }
    }
    return TruncatedSeries::from_terms(env.ctx, env.order, terms);
}

TruncatedSeries eval(const Expr &e, const EvalEnv &env)
{
    using K = Expr::Kind;
    switch (e.kind) {
    case K::Number:
        return TruncatedSeries::constant(env.ctx, env.order, e.value);
    case K::Z:
    case K::Zeta: {
        const bool z = e.kind == K::Z;
        if (!z && !env.zetaoff) {
            throw ParseError("zeta variables are not available here", e.line, e.column);
        }
        const std::size_t idx = (z ? env.zoff : *env.zetaoff) + e.index;
        TruncatedSeries v = TruncatedSeries::variable(env.ctx, env.order, idx);
        if (env.shift) {
            const GaussianRational &p = (*env.shift)[e.index];
            v += TruncatedSeries::constant(env.ctx, env.order, z ? p : p.conj());
        }
        return v;
    }
    case K::Neg:
        return -eval(*e.args[0], env);
    case K::Add:
        return eval(*e.args[0], env) + eval(*e.args[1], env);
    case K::Sub:
        return eval(*e.args[0], env) - eval(*e.args[1], env);
    case K::Mul:
        return eval(*e.args[0], env) * eval(*e.args[1], env);
    case K::Div: {
        const TruncatedSeries den = eval(*e.args[1], env);
        const GaussianRational c = den.order() >= 0 ? den.constant_term() : GaussianRational();
        if (c.is_zero()) {
            throw ParseError("division by zero", e.args[1]->line, e.args[1]->column);
        }
        return eval(*e.args[0], env) * (GaussianRational(1) / c);
    }
    case K::Pow:
        return pow(eval(*e.args[0], env), e.exponent);
    case K::Conj:
    case K::Re:
    case K::Im:
    case K::Abs2: {
        if (!env.zetaoff) {
            throw ParseError("conjugation is not available here", e.line, e.column);
        }
        const TruncatedSeries a = eval(*e.args[0], env);
        const TruncatedSeries b = conj_swap(a);
        if (e.kind == K::Conj) {
            return b;
        }
        if (e.kind == K::Re) {
            return (a + b) * GaussianRational(Rational(1, 2));
        }
        if (e.kind == K::Im) {
            return (a - b) * GaussianRational(0, Rational(-1, 2));
        }
        return a * b;
    }
    case K::RandQ:
        return eval_randq(e, env);
    }
    throw InternalError("unhandled expression kind");
}

GaussianRational eval_constant(const Expr &e)
{
    static const ContextPtr empty = SeriesContext::make({});
    EvalEnv env{empty, 0, 0, 0, std::nullopt, nullptr, 0};
    return eval(e, env).constant_term();
}

Matrix linear_part(const SeriesVector &rho, std::size_t nvars)
{
    Matrix L(rho.size(), nvars);
    for (std::size_t j = 0; j < rho.size(); ++j) {
        for (std::size_t k = 0; k < nvars; ++k) {
            L(j, k) = rho[j].coeff(Monomial::unit(nvars, k));
        }
    }
    return L;
}

} // namespace

// ---------------------------------------------------------------------------
// Expr

bool Expr::is_constant() const
{
    if (kind == Kind::Z || kind == Kind::Zeta || kind == Kind::RandQ) {
        return false;
    }
    return std::all_of(args.begin(), args.end(), [](const ExprPtr &a) { return a->is_constant(); });
}

std::size_t Expr::arity() const
{
    std::size_t a = 0;
    if (kind == Kind::Z || kind == Kind::Zeta) {
        a = index + 1;
    }
    for (auto v : vars) {
        a = std::max(a, v + 1);
    }
    for (const auto &x : args) {
        a = std::max(a, x->arity());
    }
    return a;
}

std::string Expr::to_string() const
{
    using K = Kind;
    auto bin = [&](const char *op) {
        return "(" + args[0]->to_string() + " " + op + " " + args[1]->to_string() + ")";
    };
    switch (kind) {
    case K::Number:
        return "(" + value.to_string() + ")";
    case K::Z:
        return "Z" + std::to_string(index + 1);
    case K::Zeta:
        return "zeta" + std::to_string(index + 1);
    case K::Neg:
        return "-" + args[0]->to_string();
    case K::Add:
        return bin("+");
    case K::Sub:
        return bin("-");
    case K::Mul:
        return bin("*");
    case K::Div:
        return bin("/");
    case K::Pow:
        return args[0]->to_string() + "^" + std::to_string(exponent);
    case K::Conj:
        return "conj(" + args[0]->to_string() + ")";
    case K::Re:
        return "Re(" + args[0]->to_string() + ")";
    case K::Im:
        return "Im(" + args[0]->to_string() + ")";
    case K::Abs2:
        return "abs2(" + args[0]->to_string() + ")";
    case K::RandQ: {
        std::string s = "randq(" + tag + ", " + std::to_string(min_degree) + ", " + std::to_string(max_degree);
        for (auto v : vars) {
            s += ", Z" + std::to_string(v + 1);
        }
        return s + ")";
    }
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Manifold and map files

ManifoldSpec parse_manifold(std::string_view text)
{
    RawDocument doc = parse_document(text, Dialect::Manifold);
    if (!doc.N) {
        throw ParseError("missing header N=", 1, 1);
    }
    ManifoldSpec spec;
    spec.name = doc.name.value_or("");
    spec.N = static_cast<std::size_t>(*doc.N);
    spec.exprs = std::move(doc.exprs);
    spec.d = doc.d ? static_cast<std::size_t>(*doc.d) : spec.exprs.size();
    if (spec.N < 1) {
        throw ParseError("N must be at least 1", 1, 1);
    }
    if (spec.d < 1 || spec.d > spec.N) {
        throw ParseError("codimension d=" + std::to_string(spec.d) + " must satisfy 1 <= d <= N=" +
                             std::to_string(spec.N),
                         doc.section_line, 1);
    }
    if (spec.exprs.size() != spec.d) {
        throw ParseError("expected d=" + std::to_string(spec.d) + " defining expressions, found " +
                             std::to_string(spec.exprs.size()),
                         doc.section_line, 1);
    }
    check_indices(spec.exprs, spec.N);
    spec.basepoint.assign(spec.N, GaussianRational());
    if (doc.point && !doc.point->empty()) {
        if (doc.point->size() != spec.N) {
            const auto &c = doc.point->front();
            throw ParseError("base point needs " + std::to_string(spec.N) + " coordinates", c->line, c->column);
        }
        for (std::size_t k = 0; k < spec.N; ++k) {
            spec.basepoint[k] = eval_constant(*(*doc.point)[k]);
        }
    }
    if (doc.order) {
        spec.order = static_cast<int>(*doc.order);
    }
    return spec;
}

MapSpec parse_map(std::string_view text)
{
    RawDocument doc = parse_document(text, Dialect::Map);
    if (!doc.N) {
        throw ParseError("missing header N=", 1, 1);
    }
    MapSpec spec;
    spec.name = doc.name.value_or("");
    spec.N = static_cast<std::size_t>(*doc.N);
    if (spec.N < 1) {
        throw ParseError("N must be at least 1", 1, 1);
    }
    spec.exprs = std::move(doc.exprs);
    check_indices(spec.exprs, spec.N);
    if (doc.order) {
        spec.order = static_cast<int>(*doc.order);
    }
    return spec;
}

ManifoldSpec load_manifold(const std::filesystem::path &path)
{
    ManifoldSpec spec = parse_manifold(read_file(path));
    if (spec.name.empty()) {
        spec.name = path.stem().string();
    }
    return spec;
}

MapSpec load_map(const std::filesystem::path &path)
{
    MapSpec spec = parse_map(read_file(path));
    if (spec.name.empty()) {
        spec.name = path.stem().string();
    }
    return spec;
}

int default_order(std::size_t d)
{
    return 2 * (static_cast<int>(d) + 1) + 4;
}

// ---------------------------------------------------------------------------
// Complexification and validation

TruncatedSeries conj_swap(const TruncatedSeries &s)
{
    return swap_blocks(conj_coeffs(s), "Z", "zeta");
}

SeriesVector conj_swap(const SeriesVector &v)
{
    std::vector<TruncatedSeries> out;
    for (const auto &c : v) {
        out.push_back(conj_swap(c));
    }
    return SeriesVector(v.context(), v.order(), std::move(out));
}

DefiningSystem complexify(const ManifoldSpec &spec, const ComplexifyOptions &opts)
{
    const int order = opts.order.value_or(spec.order.value_or(default_order(spec.d)));
    if (order < 1) {
        throw ValidationError("truncation order must be at least 1");
    }
    const ContextPtr ctx = SeriesContext::make({{"Z", spec.N}, {"zeta", spec.N}});
    EvalEnv env{ctx, order, 0, spec.N, spec.N, &spec.basepoint, 0};
    std::vector<TruncatedSeries> comps;
    for (std::size_t j = 0; j < spec.exprs.size(); ++j) {
        TruncatedSeries s = eval(*spec.exprs[j], env);
        const GaussianRational c = s.constant_term();
        if (!c.is_zero()) {
            throw ValidationError("base point is not on M: defining function " + std::to_string(j + 1) +
                                  " takes the value " + c.to_string() + " at p");
        }
        comps.push_back(std::move(s));
    }
    return make_system(spec.name, SeriesVector(ctx, order, std::move(comps)), opts.require_generic);
}

DefiningSystem make_system(std::string name, const SeriesVector &input, bool require_generic)
{
    const ContextPtr &ctx = input.context();
    if (!ctx || ctx->blocks().size() != 2 || ctx->blocks()[0].name != "Z" || ctx->blocks()[1].name != "zeta" ||
        ctx->blocks()[0].arity != ctx->blocks()[1].arity) {
        throw ContextMismatch("defining system must live in blocks (Z, zeta) of equal arity");
    }
    DefiningSystem sys;
    sys.name = std::move(name);
    sys.N = ctx->blocks()[0].arity;
    sys.d = input.size();
    sys.ctx = ctx;
    if (sys.d < 1 || sys.d > sys.N) {
        throw ValidationError("codimension must satisfy 1 <= d <= N");
    }
    if (input.order() < 1) {
        throw ValidationError("truncation order must be at least 1");
    }
    const std::size_t nv = 2 * sys.N;

    // Normalize each component by its linear Z-coefficient of largest index.
    std::vector<TruncatedSeries> comps;
    for (std::size_t j = 0; j < sys.d; ++j) {
        const TruncatedSeries &s = input[j];
        if (!s.constant_term().is_zero()) {
            throw ValidationError("defining function " + std::to_string(j + 1) + " does not vanish at the origin");
        }
        GaussianRational scale = 1;
        for (std::size_t k = sys.N; k-- > 0;) {
            const GaussianRational c = s.coeff(Monomial::unit(nv, k));
            if (!c.is_zero()) {
                scale = GaussianRational(1) / c;
                break;
            }
        }
        sys.scale.push_back(scale);
        comps.push_back(s * scale);
    }
    sys.rho = SeriesVector(ctx, input.order(), std::move(comps));

    // Reality certificate: conjswap(rho) = U rho with U constant invertible.
    const Matrix L = linear_part(sys.rho, nv);
    const Echelon e = rref(L);
    if (e.pivots.size() < sys.d) {
        throw ValidationError("defining functions are not independent at p (real differentials have rank " +
                              std::to_string(e.pivots.size()) + " < d=" + std::to_string(sys.d) + ")");
    }
    const SeriesVector swapped = conj_swap(sys.rho);
    const Matrix Ls = linear_part(swapped, nv);
    Matrix LP(sys.d, sys.d);
    Matrix LsP(sys.d, sys.d);
    for (std::size_t r = 0; r < sys.d; ++r) {
        for (std::size_t c = 0; c < sys.d; ++c) {
            LP(r, c) = L(r, e.pivots[c]);
            LsP(r, c) = Ls(r, e.pivots[c]);
        }
    }
    sys.reality = LsP * inverse(LP);
    if (determinant(sys.reality).is_zero()) {
        throw ValidationError("reality check failed: recombination matrix is singular");
    }
    for (std::size_t j = 0; j < sys.d; ++j) {
        TruncatedSeries combo(ctx, sys.rho.order());
        for (std::size_t k = 0; k < sys.d; ++k) {
            combo += sys.rho[k] * sys.reality(j, k);
        }
        const TruncatedSeries diff = swapped[j] - combo;
        if (auto low = diff.lowest_term()) {
            throw ValidationError("reality check failed for defining function " + std::to_string(j + 1) +
                                  " at degree " + std::to_string(low->first.degree()) + " (term " +
                                  low->first.to_string(*ctx) + "): the system is not real");
        }
    }

    sys.gradient_rank = rank(gradient_at_zero(sys));
    if (require_generic && sys.gradient_rank < sys.d) {
        throw ValidationError("not generic at p: r(p) = " + std::to_string(sys.d - sys.gradient_rank) +
                              " (complex gradients span only " + std::to_string(sys.gradient_rank) +
                              " dimensions, d=" + std::to_string(sys.d) + ")");
    }
    return sys;
}

Matrix gradient_at_zero(const DefiningSystem &sys)
{
    Matrix G(sys.d, sys.N);
    for (std::size_t j = 0; j < sys.d; ++j) {
        for (std::size_t k = 0; k < sys.N; ++k) {
            G(j, k) = sys.rho[j].coeff(Monomial::unit(2 * sys.N, k));
        }
    }
    return G;
}

SeriesMatrix gradient_series(const DefiningSystem &sys)
{
    SeriesMatrix G;
    for (std::size_t j = 0; j < sys.d; ++j) {
        std::vector<TruncatedSeries> row;
        for (std::size_t k = 0; k < sys.N; ++k) {
            row.push_back(differentiate(sys.rho[j], k));
        }
        G.push_back(std::move(row));
    }
    return G;
}

CRNumber cr_number(const DefiningSystem &sys)
{
    CRNumber cr;
    cr.rank_at_zero = rank(gradient_at_zero(sys));
    cr.r_at_zero = sys.d - cr.rank_at_zero;
    cr.generic_rank = series_generic_rank(gradient_series(sys)).rank;
    if (cr.rank_at_zero == sys.d) {
        cr.verdict = CRNumber::Verdict::Generic;
    } else if (cr.rank_at_zero == cr.generic_rank) {
        cr.verdict = CRNumber::Verdict::CRCertified;
    } else {
        cr.verdict = CRNumber::Verdict::NotCRAtZero;
    }
    return cr;
}

std::string to_string(CRNumber::Verdict v)
{
    switch (v) {
    case CRNumber::Verdict::Generic:
        return "generic";
    case CRNumber::Verdict::CRCertified:
        return "CR-certified";
    case CRNumber::Verdict::NotCRAtZero:
        return "not-CR-at-0";
    }
    return "?";
}

DefiningSystem change_coordinates(const DefiningSystem &sys, const Matrix &A)
{
    if (A.rows() != sys.N || A.cols() != sys.N || determinant(A).is_zero()) {
        throw ValidationError("coordinate change must be an invertible N x N matrix");
    }
    const int order = sys.order();
    std::vector<TruncatedSeries> inner;
    for (int half = 0; half < 2; ++half) {
        for (std::size_t k = 0; k < sys.N; ++k) {
            TruncatedSeries s(sys.ctx, order);
            for (std::size_t l = 0; l < sys.N; ++l) {
                const GaussianRational a = half == 0 ? A(k, l) : A(k, l).conj();
                if (!a.is_zero()) {
                    s += TruncatedSeries::variable(sys.ctx, order, half * sys.N + l) * a;
                }
            }
            inner.push_back(std::move(s));
        }
    }
    const SeriesVector sub(sys.ctx, order, std::move(inner));
    return make_system(sys.name, compose(sys.rho, sub), true);
}

TruncatedSeries evaluate_holomorphic(const Expr &e, const ContextPtr &ctx, int order, std::uint64_t seed)
{
    if (!ctx->has_block("Z")) {
        throw ContextMismatch("evaluate_holomorphic: context lacks a Z block");
    }
    const std::size_t arity = ctx->block("Z").arity;
    if (e.arity() > arity) {
        throw ParseError("variable index out of range", e.line, e.column);
    }
    EvalEnv env{ctx, order, ctx->block_offset("Z"), arity, std::nullopt, nullptr, seed};
    return eval(e, env);
}

std::string to_string(const DefiningSystem &sys)
{
    std::ostringstream os;
    os << "name=" << sys.name << "\n";
    os << "N=" << sys.N << "\n";
    os << "d=" << sys.d << "\n";
    os << "order=" << sys.order() << "\n";
    for (std::size_t j = 0; j < sys.d; ++j) {
        os << "rho" << (j + 1) << ": " << sys.rho[j].to_string() << "\n";
    }
    return os.str();
}

} // namespace segrekit
