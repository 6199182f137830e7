#pragma once

#include "dps/expr.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dps {

using InteractionId = int;
using ComponentId = int;
using LocationId = int;

/// Raised for malformed or inconsistent model documents.
class ModelError : public std::runtime_error {
public:
    enum class Kind { Syntax, Reference, Validation };

    ModelError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Allowed post-values of one variable: bit 0 = False allowed, bit 1 = True allowed.
enum UpdateImage : std::uint8_t {
    kUpdateFalse = 1,
    kUpdateTrue = 2,
    kUpdateAny = 3,
};

struct Transition {
    LocationId from = 0;
    LocationId to = 0;
    InteractionId label = 0;
    Expr guard = Expr::constant(true);
    /// One image per component variable; every image nonempty.
    std::vector<std::uint8_t> update;
};

struct Component {
    std::string name;
    std::vector<std::string> locations;
    std::vector<std::string> variables;
    std::vector<Transition> transitions;
    LocationId initial_location = 0;
    /// Bit k holds the initial value of variables[k].
    std::uint64_t initial_valuation = 0;
    /// Σ_i, sorted ascending; derived from the transition labels.
    std::vector<InteractionId> alphabet;

    [[nodiscard]] bool uses(InteractionId sigma) const;
    [[nodiscard]] int location_index(const std::string& loc) const;
    [[nodiscard]] int variable_index(const std::string& var) const;
};

/// A priority σ ≺ τ is stored as the ordered pair (low = σ, high = τ).
using Priority = std::pair<InteractionId, InteractionId>;
using PrioritySet = std::set<Priority>;

struct System {
    std::vector<Component> components;
    std::vector<std::string> interactions;
    PrioritySet priorities;
    /// participants[σ] = components whose alphabet contains σ, ascending.
    std::vector<std::vector<ComponentId>> participants;

    [[nodiscard]] std::size_t num_interactions() const { return interactions.size(); }
    [[nodiscard]] std::size_t num_components() const { return components.size(); }
    [[nodiscard]] int interaction_index(const std::string& name) const;
    [[nodiscard]] int component_index(const std::string& name) const;

    /// Returns a copy whose priority set is replaced.
    [[nodiscard]] System with_priorities(PrioritySet p) const;

    /// Recomputes alphabets and participants from the transitions.
    void rebuild_index();
};

/// Ordered "informs" pairs (informer, informee).
struct CommArchitecture {
    std::set<std::pair<ComponentId, ComponentId>> informs;

    [[nodiscard]] bool has(ComponentId from, ComponentId to) const { return informs.count({from, to}) != 0; }

    static CommArchitecture fully_connected(const System& s);
    /// Self, group and existing-priority transmission pairs only.
    static CommArchitecture mandated(const System& s);
};

/// Risk predicate over "Comp@Loc" and "Comp.var" atoms.
struct RiskSpec {
    Expr predicate = Expr::constant(false);
};

/// A parsed model document.
struct Model {
    System system;
    CommArchitecture architecture;
    RiskSpec risk;
};

struct SystemStats {
    std::size_t states = 0;      // |Q|, reachable product states
    std::size_t transitions = 0; // |δ|, reachable product transitions
    std::size_t interactions = 0;
    std::size_t components = 0;
};

/// vis[τ][σ] holds when every component executing τ informs every component executing σ.
class VisibilityMatrix {
public:
    VisibilityMatrix() = default;
    explicit VisibilityMatrix(std::size_t n) : n_(n), bits_(n * n, false) {}

    [[nodiscard]] bool visible(InteractionId tau, InteractionId sigma) const { return bits_[idx(tau, sigma)]; }
    void set(InteractionId tau, InteractionId sigma, bool v) { bits_[idx(tau, sigma)] = v; }
    [[nodiscard]] std::size_t size() const { return n_; }

    bool operator==(const VisibilityMatrix&) const = default;

private:
    [[nodiscard]] std::size_t idx(InteractionId tau, InteractionId sigma) const
    {
        return static_cast<std::size_t>(tau) * n_ + static_cast<std::size_t>(sigma);
    }

    std::size_t n_ = 0;
    std::vector<bool> bits_;
};

struct DeployabilityViolation {
    enum class Condition { SelfTransmission, GroupTransmission, ExistingPriorityTransmission };

    Condition condition;
    ComponentId informer;
    ComponentId informee;
    std::string detail;
};

struct DeployabilityVerdict {
    bool deployable = true;
    std::vector<DeployabilityViolation> violations;
};

// Priority-set algebra.
[[nodiscard]] PrioritySet transitive_closure(const PrioritySet& p);
[[nodiscard]] bool satisfy_irreflexivity(const PrioritySet& p);

[[nodiscard]] DeployabilityVerdict is_deployable(const System& s, const CommArchitecture& com);
[[nodiscard]] bool satisfy_arch_constraint(const PrioritySet& p, const System& s, const CommArchitecture& com);
[[nodiscard]] VisibilityMatrix visibility_matrix(const System& s, const CommArchitecture& com);

/// Local rule table per component: σ ≺ τ is listed under every component whose alphabet contains σ.
/// An empty list means the controller is unrestricted.
using ControllerTables = std::vector<std::vector<Priority>>;
[[nodiscard]] ControllerTables project_controllers(const PrioritySet& p, const System& s);

[[nodiscard]] std::string condition_name(DeployabilityViolation::Condition c);
[[nodiscard]] std::string priority_name(const System& s, const Priority& p);

// Model document I/O (JSON).
[[nodiscard]] Model parse_model(const std::string& text);
[[nodiscard]] Model load_model(const std::string& path);
[[nodiscard]] std::string emit_model(const Model& m);

/// Resolves atoms of a risk expression against a system; throws ModelError on unknown atoms.
void resolve_risk(Expr& e, const System& s);

/// Structural validation of an in-memory system (same checks the parser applies).
void validate_system(const System& s);

} // namespace dps
