#pragma once

#include "dps/game.hpp"
#include "dps/model.hpp"
#include "dps/sat.hpp"

#include <map>
#include <set>
#include <vector>

namespace dps {

/// Control states that enter the nested risk attractor by choosing `sigma` while
/// `alternatives` are shown as enabled.
struct RiskEdgeCube {
    InteractionId sigma = 0;
    std::vector<InteractionId> alternatives; // sorted, never contains sigma
    bdd::Bdd sources;                        // configuration predicate
    double num_sources = 0;
};

/// Groups 𝒯_f by (chosen interaction, visible alternatives), ordered by that signature.
[[nodiscard]] std::vector<RiskEdgeCube> extract_candidates(const GameContext& ctx, const bdd::Bdd& t_f);

struct ClauseCounts {
    std::size_t candidates = 0;
    std::size_t existing = 0;
    std::size_t irreflexive = 0;
    std::size_t transitivity = 0;
    std::size_t architectural = 0;
    std::size_t communication = 0;
    std::size_t forbidden = 0;
};

/// Propositional encoding of one fixing problem.
///
/// Candidate clauses, existing-priority units and forbidden-priority units are each
/// guarded by a selector literal passed as an assumption, so an unsat core names them.
struct FixFormula {
    sat::Solver solver;
    std::vector<RiskEdgeCube> cubes;
    std::vector<InteractionId> used;
    std::map<Priority, int> var_of;
    PrioritySet existing;
    PrioritySet forbidden;
    std::vector<int> cube_selector;
    std::map<int, Priority> unit_selector; // selector → existing or forbidden priority
    ClauseCounts counts;

    [[nodiscard]] std::vector<sat::Lit> assumptions() const;
    /// Priority variables set to True in a model.
    [[nodiscard]] PrioritySet true_priorities() const;
};

/// `existing` is 𝒫_tran; `forbidden` are priorities already decided False.
[[nodiscard]] FixFormula compile_clauses(std::vector<RiskEdgeCube> cubes, const PrioritySet& existing,
                                         const VisibilityMatrix& vis, const PrioritySet& forbidden = {});

struct FixOutcome {
    enum class Kind { Fixed, NoFix };

    Kind kind = Kind::NoFix;
    /// Fixed: new priorities, disjoint from 𝒫_tran.
    PrioritySet priorities;
    /// NoFix: one direction of every contradictory pair found in the minimized core.
    std::vector<Priority> guidance;
    /// NoFix: chosen interactions of the candidate clauses in the minimized core.
    std::set<InteractionId> refinement_candidates;
    std::vector<sat::Lit> core;
    std::uint64_t sat_calls = 0;

    [[nodiscard]] bool fixed() const { return kind == Kind::Fixed; }
};

struct ResolveOptions {
    /// Iterative deepening on the number of new priorities.
    bool min_cardinality = false;
};

/// Solves the formula. A model that is not closed, not irreflexive or not supported by
/// `vis` raises std::logic_error.
[[nodiscard]] FixOutcome resolve_fix(FixFormula& f, const VisibilityMatrix& vis, const ResolveOptions& opts = {});

/// The clause families evaluated on a complete priority set; true when every clause holds
/// with all selectors active.
[[nodiscard]] bool satisfies_formula(const FixFormula& f, const PrioritySet& assignment);

} // namespace dps
