#pragma once

#include "dps/model.hpp"
#include "dps/synthesis_result.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace dps {

/// Raised when an explicit exploration exceeds its configured state cap.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultStateCap = std::size_t{1} << 22;

/// One global configuration: a location and a valuation per component.
struct Configuration {
    std::vector<LocationId> loc;
    std::vector<std::uint64_t> val;

    bool operator==(const Configuration&) const = default;
    auto operator<=>(const Configuration&) const = default;
};

struct ConfigurationHash {
    std::size_t operator()(const Configuration& c) const noexcept;
};

[[nodiscard]] Configuration initial_configuration(const System& s);

[[nodiscard]] bool guard_enabled(const System& s, const Configuration& c, InteractionId sigma);
/// Σ_c; the system's priority set must be transitively closed.
[[nodiscard]] std::vector<InteractionId> globally_enabled(const System& s, const Configuration& c);
/// Every σ-successor of c, sorted and duplicate free.
[[nodiscard]] std::vector<Configuration> successors(const System& s, const Configuration& c, InteractionId sigma);
[[nodiscard]] bool deadlocked(const System& s, const Configuration& c);
[[nodiscard]] bool is_risk(const RiskSpec& risk, const Configuration& c);
[[nodiscard]] std::vector<InteractionId> distributively_enabled(const System& s, const CommArchitecture& com,
                                                                const Configuration& c);

struct ReachableSet {
    std::vector<Configuration> states; // BFS order; states[0] is c_0
    std::vector<int> parent;           // -1 for c_0
    std::vector<InteractionId> via;    // interaction leading from parent
    std::size_t edges = 0;
    std::unordered_map<Configuration, int, ConfigurationHash> index;

    [[nodiscard]] bool contains(const Configuration& c) const { return index.count(c) != 0; }
    /// Run c_0 … states[i] following parent links.
    [[nodiscard]] std::vector<int> path_to(int i) const;
};

[[nodiscard]] ReachableSet reachable(const System& s, std::size_t cap = kDefaultStateCap);
[[nodiscard]] SystemStats system_stats(const System& s, std::size_t cap = kDefaultStateCap);

struct Verdict {
    enum class Kind { Safe, Deadlock, Risk };

    Kind kind = Kind::Safe;
    std::vector<Configuration> witness;       // c_0 … c_k, empty when safe
    std::vector<InteractionId> witness_labels; // labels between consecutive witness states

    [[nodiscard]] bool safe() const { return kind == Kind::Safe; }
};

/// Safety check by breadth-first exploration; an unsafe verdict carries a shortest witness run.
[[nodiscard]] Verdict check_safe(const System& s, const RiskSpec& risk, std::size_t cap = kDefaultStateCap);

/// Exhaustive oracle: enumerates transitive, irreflexive, architecture-respecting priority extensions
/// in a fixed order and returns the first that makes the system safe. Requires |Σ| ≤ 6.
[[nodiscard]] SynthesisResult brute_force_synthesize(const System& s, const CommArchitecture& com,
                                                     const RiskSpec& risk, std::size_t cap = kDefaultStateCap);

struct SimulationOptions {
    std::size_t steps = 1000;
    /// Empty: lexicographic arbitration and first successor; otherwise seeded-random choices.
    std::optional<std::uint64_t> seed;
};

struct TraceStep {
    Configuration config;
    std::vector<InteractionId> enabled;
    std::optional<InteractionId> chosen;
};

struct Trace {
    enum class Outcome { Completed, Deadlock, Risk };

    std::vector<TraceStep> steps;
    Outcome outcome = Outcome::Completed;
};

/// Executes one distributed run: each step arbitrates among the distributively-enabled interactions.
/// Stops early at a deadlocked or risk configuration.
[[nodiscard]] Trace simulate_distributed(const System& s, const CommArchitecture& com, const RiskSpec& risk,
                                         const SimulationOptions& opts);

} // namespace dps
