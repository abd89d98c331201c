#ifndef POLYGRID_PARSER_HPP
#define POLYGRID_PARSER_HPP

#include <cctype>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "polygrid/polynomial.hpp"

namespace polygrid {

// Expression grammar (explicit '*', non-negative integer exponents only,
// '/' exists solely inside rational literals):
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := base ('^' nat)?
//   base   := rational | ident | '(' expr ')'
struct ExprAst;
using ExprPtr = std::unique_ptr<ExprAst>;

struct ExprAst {
    enum class Kind { literal, variable, add, sub, mul, pow, neg } kind;
    Rat value;             // literal
    std::string name;      // variable
    ExprPtr lhs, rhs;      // binary nodes
    unsigned long exponent = 0; // pow
};

namespace detail {

constexpr unsigned long kMaxExponent = 1u << 20;

struct Token {
    enum class Kind { number, ident, plus, minus, star, caret, lparen, rparen, end } kind;
    std::string text;
    std::size_t line, col;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    Token next() {
        skip_ws();
        std::size_t line = line_, col = col_;
        if (pos_ >= src_.size()) return {Token::Kind::end, "", line, col};
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num = take_digits();
            if (pos_ < src_.size() && src_[pos_] == '/') {
                advance();
                require(pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])),
                        errc::syntax, at(line, col) + "expected digits after '/'");
                num += "/" + take_digits();
            }
            return {Token::Kind::number, num, line, col};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                id += src_[pos_], advance();
            return {Token::Kind::ident, id, line, col};
        }
        advance();
        switch (c) {
            case '+': return {Token::Kind::plus, "+", line, col};
            case '-': return {Token::Kind::minus, "-", line, col};
            case '*': return {Token::Kind::star, "*", line, col};
            case '^': return {Token::Kind::caret, "^", line, col};
            case '(': return {Token::Kind::lparen, "(", line, col};
            case ')': return {Token::Kind::rparen, ")", line, col};
            default:
                fail(errc::syntax, at(line, col) + "unexpected character '" + std::string(1, c) + "'");
        }
    }

    static std::string at(std::size_t line, std::size_t col) {
        return "line " + std::to_string(line) + " col " + std::to_string(col) + ": ";
    }

private:
    void advance() {
        if (pos_ < src_.size() && src_[pos_] == '\n') ++line_, col_ = 0;
        ++pos_;
        ++col_;
    }
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
    }
    std::string take_digits() {
        std::string d;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
            d += src_[pos_], advance();
        return d;
    }

    const std::string& src_;
    std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

class Parser {
public:
    explicit Parser(const std::string& src) : lex_(src) { bump(); }

    ExprPtr parse() {
        ExprPtr e = expr();
        expect(Token::Kind::end, "end of input");
        return e;
    }

private:
    ExprPtr expr() {
        ExprPtr acc;
        bool negate = false;
        if (cur_.kind == Token::Kind::plus) bump();
        else if (cur_.kind == Token::Kind::minus) negate = true, bump();
        acc = term();
        if (negate) {
            auto n = std::make_unique<ExprAst>();
            n->kind = ExprAst::Kind::neg;
            n->lhs = std::move(acc);
            acc = std::move(n);
        }
        while (cur_.kind == Token::Kind::plus || cur_.kind == Token::Kind::minus) {
            bool minus = cur_.kind == Token::Kind::minus;
            bump();
            auto n = std::make_unique<ExprAst>();
            n->kind = minus ? ExprAst::Kind::sub : ExprAst::Kind::add;
            n->lhs = std::move(acc);
            n->rhs = term();
            acc = std::move(n);
        }
        return acc;
    }

    ExprPtr term() {
        ExprPtr acc = factor();
        while (cur_.kind == Token::Kind::star) {
            bump();
            auto n = std::make_unique<ExprAst>();
            n->kind = ExprAst::Kind::mul;
            n->lhs = std::move(acc);
            n->rhs = factor();
            acc = std::move(n);
        }
        return acc;
    }

    ExprPtr factor() {
        ExprPtr b = base();
        if (cur_.kind == Token::Kind::caret) {
            bump();
            require(cur_.kind == Token::Kind::number && cur_.text.find('/') == std::string::npos,
                    errc::syntax, where() + "exponent must be a non-negative integer literal");
            unsigned long e = 0;
            for (char c : cur_.text) {
                e = e * 10 + static_cast<unsigned long>(c - '0');
                require(e <= kMaxExponent, errc::syntax, where() + "exponent overflow");
            }
            bump();
            auto n = std::make_unique<ExprAst>();
            n->kind = ExprAst::Kind::pow;
            n->lhs = std::move(b);
            n->exponent = e;
            return n;
        }
        return b;
    }

    ExprPtr base() {
        if (cur_.kind == Token::Kind::number) {
            auto n = std::make_unique<ExprAst>();
            n->kind = ExprAst::Kind::literal;
            n->value = parse_rat(cur_.text);
            bump();
            return n;
        }
        if (cur_.kind == Token::Kind::ident) {
            auto n = std::make_unique<ExprAst>();
            n->kind = ExprAst::Kind::variable;
            n->name = cur_.text;
            bump();
            return n;
        }
        if (cur_.kind == Token::Kind::lparen) {
            bump();
            ExprPtr e = expr();
            expect(Token::Kind::rparen, "')'");
            return e;
        }
        fail(errc::syntax, where() + "expected a number, variable, or '('");
    }

    void bump() { cur_ = lex_.next(); }
    void expect(Token::Kind k, const std::string& what) {
        require(cur_.kind == k, errc::syntax, where() + "expected " + what);
        if (k != Token::Kind::end) bump();
    }
    std::string where() const { return Lexer::at(cur_.line, cur_.col); }

    Lexer lex_;
    Token cur_;
};

inline void collect_vars(const ExprAst& e, std::vector<std::string>& order) {
    switch (e.kind) {
        case ExprAst::Kind::variable:
            if (std::find(order.begin(), order.end(), e.name) == order.end())
                order.push_back(e.name);
            break;
        case ExprAst::Kind::literal: break;
        default:
            if (e.lhs) collect_vars(*e.lhs, order);
            if (e.rhs) collect_vars(*e.rhs, order);
    }
}

inline MultiPoly eval_ast(const ExprAst& e, const ArenaPtr& arena) {
    switch (e.kind) {
        case ExprAst::Kind::literal: return MultiPoly::constant(arena, e.value);
        case ExprAst::Kind::variable: return MultiPoly::var(arena, arena->index_of(e.name));
        case ExprAst::Kind::add: return eval_ast(*e.lhs, arena) + eval_ast(*e.rhs, arena);
        case ExprAst::Kind::sub: return eval_ast(*e.lhs, arena) - eval_ast(*e.rhs, arena);
        case ExprAst::Kind::mul: return eval_ast(*e.lhs, arena) * eval_ast(*e.rhs, arena);
        case ExprAst::Kind::neg: return -eval_ast(*e.lhs, arena);
        case ExprAst::Kind::pow: return eval_ast(*e.lhs, arena).pow(e.exponent);
    }
    fail(errc::internal, "unreachable AST kind");
}

} // namespace detail

// Parses an expression into canonical form. Undeclared identifiers extend
// the arena in first-occurrence order; when an arena is supplied, unknown
// variables are a syntax error.
inline MultiPoly parse_poly(const std::string& text, ArenaPtr arena = nullptr) {
    detail::Parser parser(text);
    ExprPtr ast = parser.parse();
    if (!arena) {
        std::vector<std::string> order;
        detail::collect_vars(*ast, order);
        arena = make_arena(std::move(order));
    } else {
        std::vector<std::string> order;
        detail::collect_vars(*ast, order);
        for (const auto& n : order)
            require(arena->has(n), errc::syntax, "unknown variable '" + n + "'");
    }
    return detail::eval_ast(*ast, arena);
}

// Graded-lex descending rendering; parse(format_poly(p)) == p.
inline std::string format_poly(const MultiPoly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        Rat a = c.abs();
        if (first) {
            if (c.sign() < 0) out += "-";
            first = false;
        } else {
            out += c.sign() < 0 ? " - " : " + ";
        }
        std::string mono;
        for (std::size_t v = 0; v < m.size(); ++v) {
            if (m[v] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += p.arena()->name(v);
            if (m[v] > 1) mono += "^" + std::to_string(m[v]);
        }
        if (mono.empty()) {
            out += a.str();
        } else if (a.is_one()) {
            out += mono;
        } else {
            out += a.str() + "*" + mono;
        }
    }
    return out;
}

} // namespace polygrid

#endif
