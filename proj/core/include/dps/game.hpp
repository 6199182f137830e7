#pragma once

#include "dps/bdd.hpp"
#include "dps/explicit_semantics.hpp"
#include "dps/model.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace dps {

/// Symbolic variable layout of the two-player game.
///
/// Every state bit has an unprimed copy at an even index and its primed copy
/// at the following odd index. Order: turn bit, chosen-interaction code,
/// visibility bits (by interaction), then per component its location bits
/// followed by its data bits.
struct GameContext {
    std::shared_ptr<bdd::Manager> mgr;

    std::size_t num_interactions = 0;
    bdd::Var p0 = 0;
    std::vector<bdd::Var> code;                  // least significant bit first
    std::vector<bdd::Var> vis;                   // one per interaction
    std::vector<std::vector<bdd::Var>> loc_bits; // per component, least significant first
    std::vector<std::vector<bdd::Var>> data_bits;
    std::vector<std::size_t> num_locations;

    std::vector<bdd::Var> unprimed; // all unprimed state bits, ascending
    std::vector<bdd::Var> primed;
    std::vector<bdd::Var> config_vars; // unprimed location and data bits

    bdd::Bdd unprimed_cube;
    bdd::Bdd primed_cube;
    bdd::Bdd control_cube; // unprimed p0, code and visibility bits
    bdd::Renaming to_primed;
    bdd::Renaming to_unprimed;

    static bdd::Var prime(bdd::Var v) { return v + 1; }

    [[nodiscard]] bdd::Bdd var(bdd::Var v, bool primed_copy = false) const;
    /// enc(σ) over the code bits.
    [[nodiscard]] bdd::Bdd enc(InteractionId sigma, bool primed_copy = false) const;
    /// Code bits hold some interaction index.
    [[nodiscard]] bdd::Bdd valid_code(bool primed_copy = false) const;
    [[nodiscard]] bdd::Bdd at(ComponentId i, LocationId l, bool primed_copy = false) const;
    [[nodiscard]] bdd::Bdd data(ComponentId i, int v, bool primed_copy = false) const;
    /// Location and data bits of component i keep their value.
    [[nodiscard]] bdd::Bdd stutter(ComponentId i) const;
};

[[nodiscard]] GameContext allocate_context(const System& s, std::size_t node_capacity = std::size_t{1} << 24);

/// Guard enabledness P_σ per interaction and the deadlock predicate ∧_σ ¬P_σ.
struct Enabledness {
    std::vector<bdd::Bdd> p;
    bdd::Bdd dead;
};

[[nodiscard]] Enabledness build_enabledness(const GameContext& ctx, const System& s);

/// Controllable moves for the priorities of `s` (must be transitively closed).
[[nodiscard]] bdd::Bdd build_control(const GameContext& ctx, const System& s, const VisibilityMatrix& vis,
                                     const Enabledness& en);
/// Uncontrollable updates: the environment executes the chosen interaction.
[[nodiscard]] bdd::Bdd build_env(const GameContext& ctx, const System& s);

struct EncodedStates {
    bdd::Bdd initial;
    bdd::Bdd risk;
};

[[nodiscard]] EncodedStates encode_states(const GameContext& ctx, const System& s, const RiskSpec& risk);

struct GameArena {
    std::shared_ptr<bdd::Manager> mgr;
    bdd::Bdd ctrl;
    bdd::Bdd env;
    bdd::Bdd dead;
    bdd::Bdd risk;
    bdd::Bdd initial;
    std::vector<bdd::Bdd> enabled;

    [[nodiscard]] bdd::Bdd bad() const { return dead | risk; }
};

[[nodiscard]] GameArena build_arena(const GameContext& ctx, const System& s, const VisibilityMatrix& vis,
                                    const RiskSpec& risk, const Enabledness& en);
[[nodiscard]] GameArena build_arena(const GameContext& ctx, const System& s, const VisibilityMatrix& vis,
                                    const RiskSpec& risk);

/// States reachable from `from` in one step of `rel`.
[[nodiscard]] bdd::Bdd post_image(const GameContext& ctx, const bdd::Bdd& from, const bdd::Bdd& rel);
/// Least fixpoint of the post image under ctrl ∨ env from the initial predicate.
[[nodiscard]] bdd::Bdd symbolic_reachable(const GameContext& ctx, const GameArena& arena);

[[nodiscard]] bdd::Bdd encode_configuration(const GameContext& ctx, const Configuration& c, bool primed_copy = false);
/// Existentially projects a state predicate onto location/data bits, optionally fixing the turn first
/// (true = control states, false = environment states).
[[nodiscard]] bdd::Bdd project_configs(const GameContext& ctx, const bdd::Bdd& pred,
                                       std::optional<bool> control_turn = std::nullopt);
/// Configurations of a config-only predicate, sorted; invalid location codes are skipped.
[[nodiscard]] std::vector<Configuration> decode_configurations(const GameContext& ctx, const bdd::Bdd& configs);

} // namespace dps
