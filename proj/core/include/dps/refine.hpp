#pragma once

#include "dps/model.hpp"

#include <set>
#include <vector>

namespace dps {

struct RefinedModel {
    Model model;
    /// origin[σ'] = interaction of the input model that σ' was split from.
    std::vector<InteractionId> origin;
    /// Input interactions that were actually split.
    std::set<InteractionId> split;
};

/// Splits each selected interaction σ into copies σ@l, one per source location l of its
/// first participant that has more than one source location for σ. The other participants
/// take part in every copy. Priorities mentioning σ are lifted to all copies; interactions
/// without such a participant are kept unchanged.
[[nodiscard]] RefinedModel refine_alphabet(const Model& m, const std::set<InteractionId>& selected);

/// Every interaction that can be split.
[[nodiscard]] RefinedModel refine_alphabet(const Model& m);

/// Interactions of `m` that have a participant with more than one source location.
[[nodiscard]] std::set<InteractionId> refinable_interactions(const System& s);

} // namespace dps
