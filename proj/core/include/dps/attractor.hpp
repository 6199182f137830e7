#pragma once

#include "dps/game.hpp"

#include <optional>

namespace dps {

struct NestedAttractorResult {
    bdd::Bdd nest_attr;
    /// Control transitions from outside the nested attractor into it.
    bdd::Bdd t_f;
    std::size_t outer_iters = 0;
    std::size_t inner_iters = 0;
};

/// Esc: the chosen interaction sees no other enabled interaction.
[[nodiscard]] bdd::Bdd build_escape_predicate(const GameContext& ctx);

/// Restricts both relations and both bad sets to the given reachable states.
[[nodiscard]] GameArena prune_to_reachable(const GameArena& arena, const bdd::Bdd& reach);

/// Classic environment attractor of `target`.
[[nodiscard]] bdd::Bdd risk_attractor(const GameContext& ctx, const GameArena& arena, const bdd::Bdd& target,
                                      std::size_t* iterations = nullptr);
[[nodiscard]] bdd::Bdd risk_attractor(const GameContext& ctx, const GameArena& arena);

/// Nested risk attractor of the arena's bad states, or of `seed` when given.
/// The arena is expected to be pruned to reachable states.
[[nodiscard]] NestedAttractorResult nested_risk_attractor(const GameContext& ctx, const GameArena& arena,
                                                          const bdd::Bdd& esc,
                                                          const std::optional<bdd::Bdd>& seed = std::nullopt);

[[nodiscard]] bool infeasible_at_base(const bdd::Bdd& initial, const bdd::Bdd& nest_attr);

/// NestAttr together with every source state of 𝒯_f.
[[nodiscard]] bdd::Bdd overapproximate(const GameContext& ctx, const bdd::Bdd& nest_attr, const bdd::Bdd& t_f);

} // namespace dps
