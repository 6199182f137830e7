#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dps::sat {

/// DIMACS-style literal: +v or -v for variable v ≥ 1.
using Lit = int;
using Clause = std::vector<Lit>;

enum class Result { Sat, Unsat };

struct SolverStats {
    std::uint64_t solves = 0;
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
    std::uint64_t conflicts = 0;
};

/// Conflict-driven clause-learning solver with assumptions.
///
/// Branching is deterministic: the lowest-index unassigned variable, False first.
/// After Unsat, core() holds a subset of the assumptions that is inconsistent with the clauses.
class Solver {
public:
    int new_var();
    void reserve_vars(int n);
    [[nodiscard]] int num_vars() const { return num_vars_; }
    [[nodiscard]] std::size_t num_clauses() const { return original_.size(); }

    /// Adding an empty clause (or one falsified by top-level units) makes the solver permanently Unsat.
    void add_clause(Clause c);

    Result solve(const std::vector<Lit>& assumptions = {});

    /// Model value after Sat.
    [[nodiscard]] bool value(int var) const;
    [[nodiscard]] std::vector<bool> model() const;
    [[nodiscard]] const std::vector<Lit>& core() const { return core_; }
    [[nodiscard]] const SolverStats& stats() const { return stats_; }
    [[nodiscard]] const std::vector<Clause>& clauses() const { return original_; }

    void write_dimacs(std::ostream& os) const;

private:
    using ILit = std::uint32_t; // 2*var + negated

    static ILit to_internal(Lit l) { return l > 0 ? static_cast<ILit>(2 * l) : static_cast<ILit>(-2 * l + 1); }
    static Lit to_external(ILit l) { return (l & 1U) ? -static_cast<Lit>(l >> 1) : static_cast<Lit>(l >> 1); }

    /// 1 true, -1 false, 0 unassigned.
    [[nodiscard]] int lit_value(ILit l) const
    {
        int v = assign_[l >> 1];
        return (l & 1U) ? -v : v;
    }

    void ensure_var(int v);
    void enqueue(ILit l, int reason);
    int propagate(); // conflicting clause index or -1
    void analyze(int conflict, std::vector<ILit>& learnt, int& backtrack_level);
    void analyze_final(ILit failed);
    void backtrack(int level);
    int attach(std::vector<ILit> c);

    int num_vars_ = 0;
    bool inconsistent_ = false;
    std::vector<Clause> original_;
    std::vector<std::vector<ILit>> db_;
    std::vector<std::vector<int>> watches_; // per literal: clauses watching it
    std::vector<int> assign_;
    std::vector<int> level_;
    std::vector<int> reason_;
    std::vector<ILit> trail_;
    std::vector<std::size_t> trail_lim_;
    std::size_t qhead_ = 0;
    std::vector<bool> seen_;
    std::vector<bool> model_;
    std::vector<Lit> core_;
    std::vector<ILit> pending_units_;
    SolverStats stats_;
};

/// Deletion-based minimization: every proper subset of the result is consistent with the clauses.
[[nodiscard]] std::vector<Lit> minimize_core(Solver& solver, std::vector<Lit> core);

/// Sequential-counter encoding of "at most k of lits are true".
void add_at_most_k(Solver& solver, const std::vector<Lit>& lits, int k);

/// Reads DIMACS CNF into the solver; throws std::runtime_error on malformed input.
void read_dimacs(std::istream& is, Solver& solver);

} // namespace dps::sat
