#include <cctype>
#include <cmath>

#include "cmcface/expr.hpp"

namespace cmcface {

namespace {

struct Lexer {
    const std::string& text;
    size_t pos = 0;
    int line = 1, col = 1;

    explicit Lexer(const std::string& t) : text(t) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, line, col);
    }

    void advance(size_t n = 1) {
        for (size_t k = 0; k < n && pos < text.size(); ++k) {
            if (text[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++pos;
        }
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            advance();
    }

    bool eof() {
        skip_ws();
        return pos >= text.size();
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) {
            advance();
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    double number() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.'))
            ++pos;
        if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
            size_t save = pos++;
            if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
            if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
                while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                    ++pos;
            } else {
                pos = save; // 'e' was an identifier boundary, not an exponent
            }
        }
        const std::string tok = text.substr(start, pos - start);
        col += static_cast<int>(pos - start);
        try {
            return std::stod(tok);
        } catch (const std::exception&) {
            fail("malformed number '" + tok + "'");
        }
    }

    std::string identifier() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        col += static_cast<int>(pos - start);
        return text.substr(start, pos - start);
    }
};

struct Parser {
    Lexer lex;
    const std::map<std::string, double>& params;

    Parser(const std::string& t, const std::map<std::string, double>& p)
        : lex(t), params(p) {}

    Expr parse() {
        Expr e = sum();
        if (!lex.eof()) lex.fail("unexpected trailing input");
        return e;
    }

    Expr sum() {
        Expr e = term();
        for (;;) {
            if (lex.accept('+'))
                e = e + term();
            else if (lex.accept('-'))
                e = e - term();
            else
                return e;
        }
    }

    Expr term() {
        Expr e = unary();
        for (;;) {
            if (lex.accept('*'))
                e = e * unary();
            else if (lex.accept('/'))
                e = e / unary();
            else
                return e;
        }
    }

    Expr unary() {
        if (lex.accept('-')) return -unary();
        if (lex.accept('+')) return unary();
        return power();
    }

    Expr power() {
        Expr base = atom();
        if (!lex.accept('^')) return base;
        // Right associative; the exponent may carry its own sign or power.
        Expr ex = lex.accept('-') ? -power() : power();
        const auto c = ex.as_const();
        if (c) {
            if (std::abs(c->imag()) > 1e-14) lex.fail("exponent must be real");
            return pow_expr(base, c->real());
        }
        // Variable exponent: supported for positive real constant bases via
        // c^f = exp(f log c).
        const auto b = base.as_const();
        if (b && b->imag() == 0.0 && b->real() > 0.0)
            return exp_expr(ex * Expr::constant(std::log(b->real())));
        lex.fail("unsupported power: exponent must be constant "
                 "(or the base a positive real constant)");
    }

    Expr atom() {
        const char c = lex.peek();
        if (c == '(') {
            lex.advance();
            Expr e = sum();
            lex.expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return Expr::constant(lex.number());
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::string id = lex.identifier();
            if (id == "exp" || id == "log") {
                lex.expect('(');
                Expr arg = sum();
                lex.expect(')');
                return id == "exp" ? exp_expr(arg) : log_expr(arg);
            }
            if (id == "z") return Expr::var();
            if (id == "i") return Expr::constant(cplx(0, 1));
            if (id == "pi") return Expr::constant(M_PI);
            if (id == "e") return Expr::constant(std::exp(1.0));
            if (auto it = params.find(id); it != params.end())
                return Expr::constant(it->second);
            lex.fail("unknown identifier '" + id + "'");
        }
        lex.fail("unexpected character");
    }
};

} // namespace

Expr parse_expr(const std::string& text, const std::map<std::string, double>& params) {
    Parser p(text, params);
    return p.parse();
}

} // namespace cmcface
