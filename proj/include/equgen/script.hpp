#ifndef EQUGEN_SCRIPT_HPP
#define EQUGEN_SCRIPT_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "equgen/partition.hpp"
#include "equgen/quasiorder.hpp"

namespace equgen {

/// A lattice element of either kind, as produced by script evaluation.
using LatticeValue = std::variant<Partition, Quasiorder>;

std::string format_value(const LatticeValue& v);

/// Expression over meet `*`, join `+`, `inv(e)`, the atom makers
/// `at(x,y)` / `qu(x,y)`, literals, and previously bound names.
/// `*` binds tighter than `+`.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { name, meet, join, inv, at, qu, lit };
    Kind kind = Kind::name;
    std::string id;       // name
    ExprPtr lhs, rhs;     // meet/join (inv uses lhs only)
    int x = -1, y = -1;   // at/qu
    std::optional<LatticeValue> lit; // lit
};

ExprPtr make_name(std::string id);
ExprPtr make_meet(ExprPtr a, ExprPtr b);
ExprPtr make_join(ExprPtr a, ExprPtr b);
ExprPtr make_inv(ExprPtr a);
ExprPtr make_at(int x, int y);
ExprPtr make_qu(int x, int y);
ExprPtr make_lit(LatticeValue v);

/// Left fold of make_join over a nonempty list.
ExprPtr make_join_all(const std::vector<ExprPtr>& parts);

std::string format_expr(const Expr& e);

struct ScriptStep {
    std::string name;
    ExprPtr expr;
    ExprPtr expect; // optional; must contain no names
};

/// An ordered derivation: named generator bindings followed by steps,
/// each step built from generators and earlier steps only.
struct Script {
    std::string kind = "equ"; // equ | quo
    int n = 1;
    std::vector<std::pair<std::string, ExprPtr>> generators;
    std::vector<std::pair<std::string, int>> elem_aliases; // readable element names
    std::vector<ScriptStep> steps;
};

/// File format:
///   kind equ|quo
///   n=<N>
///   elem <name> = <int>           (optional aliases usable in at/qu)
///   gen <name> = <literal expr>
///   <name> := <expr> [expect <literal expr>]
///   # comment
Script parse_script(const std::string& text);
std::string format_script(const Script& s);

struct StepReport {
    std::string name;
    bool ok = true;
    std::string computed;
    std::string expected; // empty when the step carries no expectation
};

struct ReplayReport {
    bool pass = true;
    std::vector<StepReport> steps;
    /// Every bound value (generators + steps) in binding order.
    std::vector<std::pair<std::string, LatticeValue>> values;
};

/// Evaluates the steps in order and checks each expectation exactly.
ReplayReport replay(const Script& s);

/// Evaluation environment for a single expression; names resolve
/// against earlier bindings.
LatticeValue eval_expr(const Expr& e, const std::string& kind, int n,
                       const std::map<std::string, LatticeValue>& env);

} // namespace equgen

#endif
