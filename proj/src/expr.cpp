#include "germ/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>

namespace germ::expr {

namespace {

struct FunctionInfo {
    const char* name;
    int arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"sin", 1}, {"cos", 1}, {"tan", 1}, {"exp", 1},
    {"ln", 1},  {"sqrt", 1}, {"abs", 1}, {"pow", 2},
};

const FunctionInfo* lookup_function(std::string_view name) {
    for (const auto& f : kFunctions)
        if (name == f.name) return &f;
    return nullptr;
}

enum class TokKind { Number, Name, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    TokKind kind = TokKind::End;
    SourceSpan span;
    double number = 0.0;
    std::string text;
};

Token make_token(TokKind kind, std::size_t begin, std::size_t end) {
    Token t;
    t.kind = kind;
    t.span = {begin, end};
    return t;
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::size_t start = pos_;
        if (pos_ >= src_.size()) return make_token(TokKind::End, start, start);

        const char c = src_[pos_];
        switch (c) {
            case '+': ++pos_; return make_token(TokKind::Plus, start, pos_);
            case '-': ++pos_; return make_token(TokKind::Minus, start, pos_);
            case '*': ++pos_; return make_token(TokKind::Star, start, pos_);
            case '/': ++pos_; return make_token(TokKind::Slash, start, pos_);
            case '^': ++pos_; return make_token(TokKind::Caret, start, pos_);
            case '(': ++pos_; return make_token(TokKind::LParen, start, pos_);
            case ')': ++pos_; return make_token(TokKind::RParen, start, pos_);
            case ',': ++pos_; return make_token(TokKind::Comma, start, pos_);
            default: break;
        }

        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number(start);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            Token t = make_token(TokKind::Name, start, pos_);
            t.text = std::string(src_.substr(start, pos_ - start));
            return t;
        }
        throw Error(ErrorKind::SyntaxError,
                    "unexpected character '" + std::string(1, c) + "'")
            .with_span(start, start + 1);
    }

private:
    Token lex_number(std::size_t start) {
        // decimal with optional fraction and exponent; no hex floats
        bool seen_digit = false;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            ++pos_;
            seen_digit = true;
        }
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
                seen_digit = true;
            }
        }
        if (!seen_digit) {
            throw Error(ErrorKind::SyntaxError, "malformed number literal")
                .with_span(start, pos_ + 1);
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            } else {
                pos_ = mark;  // 'e' belongs to a following name, not this literal
            }
        }
        Token t = make_token(TokKind::Number, start, pos_);
        const std::string_view slice = src_.substr(start, pos_ - start);
        auto [ptr, ec] = std::from_chars(slice.data(), slice.data() + slice.size(), t.number);
        if (ec != std::errc() || ptr != slice.data() + slice.size()) {
            throw Error(ErrorKind::SyntaxError, "malformed number literal").with_span(start, pos_);
        }
        return t;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    Parser(std::string_view text, std::span<const std::string> declared)
        : lexer_(text), declared_(declared) {
        advance();
    }

    AstPtr parse() {
        AstPtr e = parse_sum();
        if (cur_.kind != TokKind::End) {
            throw Error(ErrorKind::SyntaxError, "unexpected trailing input")
                .with_span(cur_.span.begin, cur_.span.end);
        }
        return e;
    }

private:
    void advance() { cur_ = lexer_.next(); }

    bool accept(TokKind k) {
        if (cur_.kind != k) return false;
        advance();
        return true;
    }

    void expect(TokKind k, const char* what) {
        if (cur_.kind != k) {
            throw Error(ErrorKind::SyntaxError, std::string("expected ") + what)
                .with_span(cur_.span.begin, cur_.span.end == cur_.span.begin
                                                ? cur_.span.begin + 1
                                                : cur_.span.end);
        }
        advance();
    }

    // sum := term (('+' | '-') term)*
    AstPtr parse_sum() {
        AstPtr lhs = parse_term();
        for (;;) {
            BinaryOp op;
            if (cur_.kind == TokKind::Plus) op = BinaryOp::Add;
            else if (cur_.kind == TokKind::Minus) op = BinaryOp::Sub;
            else break;
            advance();
            AstPtr rhs = parse_term();
            lhs = make_binary(op, lhs, rhs);
        }
        return lhs;
    }

    // term := unary (('*' | '/') unary)*
    AstPtr parse_term() {
        AstPtr lhs = parse_unary();
        for (;;) {
            BinaryOp op;
            if (cur_.kind == TokKind::Star) op = BinaryOp::Mul;
            else if (cur_.kind == TokKind::Slash) op = BinaryOp::Div;
            else break;
            advance();
            AstPtr rhs = parse_unary();
            lhs = make_binary(op, lhs, rhs);
        }
        return lhs;
    }

    // unary := '-' unary | power   (so ^ binds tighter than unary minus)
    AstPtr parse_unary() {
        if (cur_.kind == TokKind::Minus) {
            const std::size_t begin = cur_.span.begin;
            advance();
            AstPtr child = parse_unary();
            auto node = std::make_shared<Ast>();
            node->node = Ast::Unary{UnaryOp::Neg, child};
            node->span = {begin, child->span.end};
            return node;
        }
        return parse_power();
    }

    // power := atom ('^' unary)?   (right associative; exponent may carry unary minus)
    AstPtr parse_power() {
        AstPtr base = parse_atom();
        if (cur_.kind == TokKind::Caret) {
            advance();
            AstPtr exponent = parse_unary();
            return make_binary(BinaryOp::Pow, base, exponent);
        }
        return base;
    }

    AstPtr parse_atom() {
        if (cur_.kind == TokKind::Number) {
            auto node = std::make_shared<Ast>();
            node->node = Ast::Constant{cur_.number};
            node->span = cur_.span;
            advance();
            return node;
        }
        if (cur_.kind == TokKind::Name) {
            const Token name = cur_;
            advance();
            if (cur_.kind == TokKind::LParen) return parse_call(name);
            return make_variable(name);
        }
        if (cur_.kind == TokKind::LParen) {
            advance();
            AstPtr inner = parse_sum();
            expect(TokKind::RParen, "')'");
            return inner;
        }
        throw Error(ErrorKind::SyntaxError,
                    cur_.kind == TokKind::End ? "unexpected end of expression"
                                              : "expected a value")
            .with_span(cur_.span.begin,
                       cur_.span.end == cur_.span.begin ? cur_.span.begin + 1 : cur_.span.end);
    }

    AstPtr parse_call(const Token& name) {
        const FunctionInfo* fn = lookup_function(name.text);
        if (fn == nullptr) {
            throw Error(ErrorKind::UnknownFunction, "unknown function '" + name.text + "'")
                .with_span(name.span.begin, name.span.end)
                .with_token(name.text);
        }
        expect(TokKind::LParen, "'('");
        std::vector<AstPtr> args;
        args.push_back(parse_sum());
        while (accept(TokKind::Comma)) args.push_back(parse_sum());
        const std::size_t end = cur_.span.end;
        expect(TokKind::RParen, "')'");
        if (static_cast<int>(args.size()) != fn->arity) {
            throw Error(ErrorKind::SyntaxError,
                        "function '" + name.text + "' takes " + std::to_string(fn->arity) +
                            " argument(s)")
                .with_span(name.span.begin, end);
        }
        auto node = std::make_shared<Ast>();
        node->node = Ast::Call{name.text, std::move(args)};
        node->span = {name.span.begin, end};
        return node;
    }

    AstPtr make_variable(const Token& name) {
        int index = -1;
        for (std::size_t i = 0; i < declared_.size(); ++i) {
            if (declared_[i] == name.text) {
                index = static_cast<int>(i);
                break;
            }
        }
        if (index < 0) {
            throw Error(ErrorKind::UnknownVariable, "unknown variable '" + name.text + "'")
                .with_span(name.span.begin, name.span.end)
                .with_token(name.text);
        }
        auto node = std::make_shared<Ast>();
        node->node = Ast::Variable{name.text, index};
        node->span = name.span;
        return node;
    }

    static AstPtr make_binary(BinaryOp op, AstPtr lhs, AstPtr rhs) {
        auto node = std::make_shared<Ast>();
        node->span = {lhs->span.begin, rhs->span.end};
        node->node = Ast::Binary{op, std::move(lhs), std::move(rhs)};
        return node;
    }

    Lexer lexer_;
    std::span<const std::string> declared_;
    Token cur_;
};

bool is_integer_valued(double x) { return std::isfinite(x) && x == std::trunc(x); }

double apply_pow(double base, double exponent, const SourceSpan& span) {
    if (base == 0.0 && exponent < 0.0) {
        throw Error(ErrorKind::DomainError, "0 raised to a negative power")
            .with_span(span.begin, span.end);
    }
    if (base < 0.0 && !is_integer_valued(exponent)) {
        throw Error(ErrorKind::DomainError, "negative base with non-integer exponent")
            .with_span(span.begin, span.end);
    }
    return std::pow(base, exponent);
}

double apply_call(const Ast::Call& call, const SourceSpan& span, std::span<const double> args) {
    const double a = args[0];
    if (call.function == "sin") return std::sin(a);
    if (call.function == "cos") return std::cos(a);
    if (call.function == "tan") return std::tan(a);
    if (call.function == "exp") return std::exp(a);
    if (call.function == "abs") return std::abs(a);
    if (call.function == "ln") {
        if (a <= 0.0) {
            throw Error(ErrorKind::DomainError, "ln of a non-positive value")
                .with_span(span.begin, span.end)
                .with_value(a);
        }
        return std::log(a);
    }
    if (call.function == "sqrt") {
        if (a < 0.0) {
            throw Error(ErrorKind::DomainError, "sqrt of a negative value")
                .with_span(span.begin, span.end)
                .with_value(a);
        }
        return std::sqrt(a);
    }
    if (call.function == "pow") return apply_pow(a, args[1], span);
    throw Error(ErrorKind::UnknownFunction, "unknown function '" + call.function + "'")
        .with_token(call.function);
}

// Resolver maps a Variable node to its value.
template <typename Resolver>
double eval_impl(const Ast& ast, const Resolver& resolve) {
    return std::visit(
        [&](const auto& node) -> double {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Ast::Constant>) {
                return node.value;
            } else if constexpr (std::is_same_v<T, Ast::Variable>) {
                return resolve(node, ast.span);
            } else if constexpr (std::is_same_v<T, Ast::Unary>) {
                return -eval_impl(*node.operand, resolve);
            } else if constexpr (std::is_same_v<T, Ast::Binary>) {
                const double l = eval_impl(*node.lhs, resolve);
                const double r = eval_impl(*node.rhs, resolve);
                switch (node.op) {
                    case BinaryOp::Add: return l + r;
                    case BinaryOp::Sub: return l - r;
                    case BinaryOp::Mul: return l * r;
                    case BinaryOp::Div: return l / r;  // IEEE semantics
                    case BinaryOp::Pow: return apply_pow(l, r, ast.span);
                }
                return 0.0;
            } else {
                std::vector<double> args;
                args.reserve(node.args.size());
                for (const auto& arg : node.args) args.push_back(eval_impl(*arg, resolve));
                return apply_call(node, ast.span, args);
            }
        },
        ast.node);
}

void collect_variables(const Ast& ast, std::map<int, std::string>& out) {
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Ast::Variable>) {
                out.emplace(node.index, node.name);
            } else if constexpr (std::is_same_v<T, Ast::Unary>) {
                collect_variables(*node.operand, out);
            } else if constexpr (std::is_same_v<T, Ast::Binary>) {
                collect_variables(*node.lhs, out);
                collect_variables(*node.rhs, out);
            } else if constexpr (std::is_same_v<T, Ast::Call>) {
                for (const auto& arg : node.args) collect_variables(*arg, out);
            }
        },
        ast.node);
}

void print_impl(const Ast& ast, std::string& out) {
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Ast::Constant>) {
                char buf[40];
                std::snprintf(buf, sizeof(buf), "%.17g", node.value);
                out += buf;
            } else if constexpr (std::is_same_v<T, Ast::Variable>) {
                out += node.name;
            } else if constexpr (std::is_same_v<T, Ast::Unary>) {
                out += "(-";
                print_impl(*node.operand, out);
                out += ')';
            } else if constexpr (std::is_same_v<T, Ast::Binary>) {
                out += '(';
                print_impl(*node.lhs, out);
                switch (node.op) {
                    case BinaryOp::Add: out += " + "; break;
                    case BinaryOp::Sub: out += " - "; break;
                    case BinaryOp::Mul: out += " * "; break;
                    case BinaryOp::Div: out += " / "; break;
                    case BinaryOp::Pow: out += " ^ "; break;
                }
                print_impl(*node.rhs, out);
                out += ')';
            } else {
                out += node.function;
                out += '(';
                for (std::size_t i = 0; i < node.args.size(); ++i) {
                    if (i > 0) out += ", ";
                    print_impl(*node.args[i], out);
                }
                out += ')';
            }
        },
        ast.node);
}

}  // namespace

Bindings::Bindings(std::initializer_list<std::pair<std::string, double>> init) {
    for (const auto& [name, value] : init) set(name, value);
}

void Bindings::set(std::string name, double value) {
    for (auto& entry : entries_) {
        if (entry.first == name) {
            entry.second = value;
            return;
        }
    }
    entries_.emplace_back(std::move(name), value);
}

const double* Bindings::find(std::string_view name) const {
    for (const auto& entry : entries_)
        if (entry.first == name) return &entry.second;
    return nullptr;
}

AstPtr parse_expression(std::string_view text, std::span<const std::string> declared_vars) {
    bool all_space = true;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) all_space = false;
    if (text.empty() || all_space) {
        throw Error(ErrorKind::SyntaxError, "empty expression").with_span(0, text.size());
    }
    Parser parser(text, declared_vars);
    return parser.parse();
}

double eval_ast(const Ast& ast, std::span<const double> values) {
    return eval_impl(ast, [&](const Ast::Variable& var, const SourceSpan& span) -> double {
        if (var.index < 0 || var.index >= static_cast<int>(values.size())) {
            throw Error(ErrorKind::MissingBinding, "no value for variable '" + var.name + "'")
                .with_span(span.begin, span.end)
                .with_token(var.name);
        }
        return values[var.index];
    });
}

double eval_ast(const Ast& ast, const Bindings& env) {
    return eval_impl(ast, [&](const Ast::Variable& var, const SourceSpan& span) -> double {
        const double* v = env.find(var.name);
        if (v == nullptr) {
            throw Error(ErrorKind::MissingBinding, "no binding for variable '" + var.name + "'")
                .with_span(span.begin, span.end)
                .with_token(var.name);
        }
        return *v;
    });
}

std::string print_expression(const Ast& ast) {
    std::string out;
    print_impl(ast, out);
    return out;
}

std::vector<std::string> free_variables(const Ast& ast) {
    std::map<int, std::string> found;
    collect_variables(ast, found);
    std::vector<std::string> out;
    out.reserve(found.size());
    for (const auto& [index, name] : found) out.push_back(name);
    return out;
}

bool is_known_function(std::string_view name) { return lookup_function(name) != nullptr; }

}  // namespace germ::expr
