#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "germ/error.hpp"

namespace germ::expr {

/// Half-open byte range [begin, end) into the source text.
struct SourceSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
};

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class UnaryOp { Neg };

struct Ast;
using AstPtr = std::shared_ptr<const Ast>;

/// Immutable expression tree. Variables carry both their name and their
/// index in the declaration order used at parse time, so evaluation over
/// a flat value array needs no name lookups.
struct Ast {
    struct Constant {
        double value;
    };
    struct Variable {
        std::string name;
        int index;  // position in the declared-variable list
    };
    struct Unary {
        UnaryOp op;
        AstPtr operand;
    };
    struct Binary {
        BinaryOp op;
        AstPtr lhs;
        AstPtr rhs;
    };
    struct Call {
        std::string function;  // sin cos tan exp ln sqrt abs pow
        std::vector<AstPtr> args;
    };

    std::variant<Constant, Variable, Unary, Binary, Call> node;
    SourceSpan span;
};

/// Ordered name → value map used for evaluation.
class Bindings {
public:
    Bindings() = default;
    Bindings(std::initializer_list<std::pair<std::string, double>> init);

    void set(std::string name, double value);
    const double* find(std::string_view name) const;
    std::size_t size() const noexcept { return entries_.size(); }
    const std::vector<std::pair<std::string, double>>& entries() const noexcept { return entries_; }

private:
    std::vector<std::pair<std::string, double>> entries_;
};

/// Parse infix text over the declared variables.
///
/// Grammar (see docs/expression-grammar.md): + − * / ^ with ^ right
/// associative and binding tighter than unary minus; function calls from
/// the fixed set; decimal literals with optional exponent. Errors carry
/// 0-based byte spans.
AstPtr parse_expression(std::string_view text, std::span<const std::string> declared_vars);

/// Evaluate with values given in declared-variable order.
double eval_ast(const Ast& ast, std::span<const double> values);

/// Evaluate against named bindings; missing names raise MissingBinding.
double eval_ast(const Ast& ast, const Bindings& env);

/// Serialize back to parseable text (fully parenthesized).
std::string print_expression(const Ast& ast);

/// Names of the variables that actually occur, in declaration order.
std::vector<std::string> free_variables(const Ast& ast);

bool is_known_function(std::string_view name);

}  // namespace germ::expr
