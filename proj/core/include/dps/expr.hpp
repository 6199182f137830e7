#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace dps {

/// Boolean expression tree used for transition guards and risk predicates.
///
/// Atoms are resolved at parse time: for guards `index` is the variable
/// index inside the owning component; for risk predicates `component` names
/// the component and `is_location` tells whether the atom is "Comp@Loc" (a
/// location test) or "Comp.var" (a variable test).
struct Expr {
    enum class Kind { Const, Atom, Not, And, Or };

    Kind kind = Kind::Const;
    bool value = true;  // Const only
    std::string text;   // Atom source text, kept for error messages and emission
    int component = -1; // Atom: owning component (risk atoms only)
    int index = -1;     // Atom: variable or location index
    bool is_location = false;
    std::vector<Expr> kids;

    static Expr constant(bool v);
    static Expr atom(std::string text);
    static Expr negate(Expr e);
    static Expr conj(std::vector<Expr> es);
    static Expr disj(std::vector<Expr> es);

    /// Evaluates with a caller-provided atom valuation.
    [[nodiscard]] bool eval(const std::function<bool(const Expr&)>& atom_value) const;

    /// Visits every atom node (mutable, used by the resolver).
    void for_each_atom(const std::function<void(Expr&)>& fn);
    void for_each_atom(const std::function<void(const Expr&)>& fn) const;
};

} // namespace dps
