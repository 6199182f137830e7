#pragma once

#include "dps/explicit_semantics.hpp"
#include "dps/model.hpp"
#include "dps/synthesis_result.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dps {

enum class Guidance { Off, Rp1, Rp2 };
enum class Refinement { Off, Lazy, Eager };

struct SynthesisOptions {
    /// Retry a failed fix on the attractor enlarged by the sources of 𝒯_f.
    bool overapprox = false;
    Refinement refine = Refinement::Off;
    /// Rp1: smallest fixes first. Rp2: branch on core-derived priorities first.
    Guidance guidance = Guidance::Rp2;
    /// Diagnosis-based fixing at each search node; off leaves plain branching.
    bool fixing = true;
    /// Wall-clock budget in seconds; zero or negative means unlimited.
    double budget_seconds = 150.0;
    std::size_t state_cap = kDefaultStateCap;
    std::size_t bdd_nodes = std::size_t{1} << 22;
};

/// Partial map from priority variables to truth values.
struct Assignment {
    std::map<Priority, bool> values;
    int level = 0;

    [[nodiscard]] bool assigned(const Priority& p) const { return values.count(p) != 0; }
    [[nodiscard]] PrioritySet true_set() const;
};

/// Next variable to branch on: the first unassigned guidance entry that the architecture
/// supports, otherwise the lexicographically least unassigned supported pair.
[[nodiscard]] std::optional<Priority> choose_free_variable(const VisibilityMatrix& vis, const Assignment& asgn,
                                                           const std::vector<Priority>& guidance = {});

/// Runs the search on `m`; with refinement enabled the result may refer to a refined model.
[[nodiscard]] SynthesisResult synthesize(const Model& m, const SynthesisOptions& opts = {});

struct ValidationReport {
    bool closed_irreflexive = false;
    bool deployable = false;
    bool safe = false;
    bool explicit_check = false; // false: symbolic reachability was used
    bool simulation_ok = false;
    std::vector<std::string> failures;

    [[nodiscard]] bool ok() const { return failures.empty(); }
};

/// Independent re-check of a candidate 𝒫_d+ for the model's system and architecture.
[[nodiscard]] ValidationReport validate_result(const Model& m, const PrioritySet& added,
                                               std::size_t cap = kDefaultStateCap);

/// Symbolic safety check of a system whose priorities are taken as given (closed internally).
[[nodiscard]] bool symbolic_safe(const System& s, const CommArchitecture& com, const RiskSpec& risk);

} // namespace dps
