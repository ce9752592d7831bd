#pragma once

// Arithmetic expressions over named variables, for config-file inputs.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?
//   primary := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
//
// Functions: sin cos tan exp log sqrt abs sinh cosh tanh floor (one argument),
// pow min max eq (two arguments; eq(a, b) is 1 when a == b, else 0).
// Constants: pi, e.

#include "subfrac/errors.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace subfrac::cli {

class Expression {
public:
    /// Parses text; variables must be listed in the order values are later passed to operator().
    Expression(std::string text, std::vector<std::string> variables)
        : text_(std::move(text)), vars_(std::move(variables)) {
        Parser p{text_, vars_};
        root_ = p.parse();
    }

    double operator()(const std::vector<double>& values) const {
        if (values.size() != vars_.size()) throw ConfigError("expression: wrong number of variable values");
        return root_->eval(values);
    }

    const std::string& text() const { return text_; }

private:
    struct Node {
        virtual ~Node() = default;
        virtual double eval(const std::vector<double>& v) const = 0;
    };
    using Ptr = std::shared_ptr<const Node>;

    struct Constant : Node {
        double c;
        explicit Constant(double v) : c(v) {}
        double eval(const std::vector<double>&) const override { return c; }
    };
    struct Variable : Node {
        std::size_t i;
        explicit Variable(std::size_t k) : i(k) {}
        double eval(const std::vector<double>& v) const override { return v[i]; }
    };
    struct Unary : Node {
        double (*f)(double);
        Ptr a;
        Unary(double (*fn)(double), Ptr x) : f(fn), a(std::move(x)) {}
        double eval(const std::vector<double>& v) const override { return f(a->eval(v)); }
    };
    struct Binary : Node {
        char op;
        Ptr a, b;
        Binary(char o, Ptr x, Ptr y) : op(o), a(std::move(x)), b(std::move(y)) {}
        double eval(const std::vector<double>& v) const override {
            const double x = a->eval(v), y = b->eval(v);
            switch (op) {
                case '+': return x + y;
                case '-': return x - y;
                case '*': return x * y;
                case '/': return x / y;
                case '^': return std::pow(x, y);
                case '<': return std::min(x, y);
                case '>': return std::max(x, y);
                default: return x == y ? 1.0 : 0.0;
            }
        }
    };

    struct Parser {
        const std::string& s;
        const std::vector<std::string>& vars;
        std::size_t pos = 0;

        [[noreturn]] void fail(const std::string& what) const {
            throw ConfigError("expression '" + s + "': " + what + " at offset " + std::to_string(pos));
        }

        void skip() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }

        bool accept(char c) {
            skip();
            if (pos < s.size() && s[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }

        Ptr parse() {
            Ptr e = expr();
            skip();
            if (pos != s.size()) fail("unexpected character");
            return e;
        }

        Ptr expr() {
            Ptr a = term();
            for (;;) {
                if (accept('+')) {
                    a = std::make_shared<Binary>('+', a, term());
                } else if (accept('-')) {
                    a = std::make_shared<Binary>('-', a, term());
                } else {
                    return a;
                }
            }
        }

        Ptr term() {
            Ptr a = unary();
            for (;;) {
                if (accept('*')) {
                    a = std::make_shared<Binary>('*', a, unary());
                } else if (accept('/')) {
                    a = std::make_shared<Binary>('/', a, unary());
                } else {
                    return a;
                }
            }
        }

        Ptr unary() {
            if (accept('-')) return std::make_shared<Binary>('-', std::make_shared<Constant>(0.0), unary());
            if (accept('+')) return unary();
            return power();
        }

        Ptr power() {
            Ptr a = primary();
            if (accept('^')) return std::make_shared<Binary>('^', a, unary());
            return a;
        }

        Ptr primary() {
            skip();
            if (pos >= s.size()) fail("unexpected end");
            if (accept('(')) {
                Ptr e = expr();
                if (!accept(')')) fail("expected ')'");
                return e;
            }
            const char c = s[pos];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
            fail("unexpected character");
        }

        Ptr number() {
            const char* begin = s.c_str() + pos;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos += static_cast<std::size_t>(end - begin);
            return std::make_shared<Constant>(v);
        }

        Ptr name() {
            const std::size_t start = pos;
            while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
            const std::string id = s.substr(start, pos - start);
            if (accept('(')) {
                std::vector<Ptr> args{expr()};
                while (accept(',')) args.push_back(expr());
                if (!accept(')')) fail("expected ')'");
                return call(id, args);
            }
            for (std::size_t i = 0; i < vars.size(); ++i) {
                if (vars[i] == id) return std::make_shared<Variable>(i);
            }
            if (id == "pi") return std::make_shared<Constant>(3.141592653589793238462643383279502884);
            if (id == "e") return std::make_shared<Constant>(2.718281828459045235360287471352662498);
            fail("unknown name '" + id + "'");
        }

        Ptr call(const std::string& id, const std::vector<Ptr>& a) {
            static const std::map<std::string, double (*)(double)> one{
                {"sin", [](double x) { return std::sin(x); }},   {"cos", [](double x) { return std::cos(x); }},
                {"tan", [](double x) { return std::tan(x); }},   {"exp", [](double x) { return std::exp(x); }},
                {"log", [](double x) { return std::log(x); }},   {"sqrt", [](double x) { return std::sqrt(x); }},
                {"abs", [](double x) { return std::abs(x); }},   {"sinh", [](double x) { return std::sinh(x); }},
                {"cosh", [](double x) { return std::cosh(x); }}, {"tanh", [](double x) { return std::tanh(x); }},
                {"floor", [](double x) { return std::floor(x); }},
            };
            static const std::map<std::string, char> two{{"pow", '^'}, {"min", '<'}, {"max", '>'}, {"eq", '='}};
            if (const auto it = one.find(id); it != one.end()) {
                if (a.size() != 1) fail(id + " takes one argument");
                return std::make_shared<Unary>(it->second, a[0]);
            }
            if (const auto it = two.find(id); it != two.end()) {
                if (a.size() != 2) fail(id + " takes two arguments");
                return std::make_shared<Binary>(it->second, a[0], a[1]);
            }
            fail("unknown function '" + id + "'");
        }
    };

    std::string text_;
    std::vector<std::string> vars_;
    Ptr root_;
};

}  // namespace subfrac::cli
