#pragma once

#include "dps/model.hpp"

#include <cstdint>
#include <random>

namespace dps::corpus {

struct CorpusOptions {
    int max_components = 3;
    int max_locations = 3;
    int max_variables = 2;
    int max_interactions = 5;
    /// Probability of seeding one or two base priorities.
    double priority_rate = 0.3;
    /// Probability of a non-trivial risk predicate.
    double risk_rate = 0.3;
    /// Probability of each extra informs pair beyond the mandated ones.
    double extra_link_rate = 0.35;
};

/// Random well-formed model with a deployable architecture. Every component participates in at
/// least one interaction and has at least one transition for every label in its alphabet.
Model random_model(std::mt19937_64& rng, const CorpusOptions& opts = {});

/// Deterministic corpus instance `k`.
Model corpus_model(std::uint64_t k, const CorpusOptions& opts = {});

/// Two always-enabled interactions on different components: `a` enters a risk location, `b` loops.
/// Unless `b_visible_to_a`, the two are mutually invisible.
Model two_choice_model(bool b_visible_to_a);

} // namespace dps::corpus
