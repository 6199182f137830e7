#pragma once

#include "dps/model.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace dps {

struct SynthesisStats {
    std::uint64_t outer_iters = 0;
    std::uint64_t inner_iters = 0;
    std::uint64_t sat_calls = 0;
    std::uint64_t nodes = 0;       // search nodes visited
    std::uint64_t fixes_tried = 0;
    std::uint64_t refinements = 0; // interactions split by alphabet refinement
    std::uint64_t time_ms = 0;
};

struct SynthesisResult {
    enum class Status { Success, Infeasible, Exhausted };

    Status status = Status::Exhausted;
    /// Success: newly introduced priorities 𝒫_d+ (closed together with the base priorities).
    PrioritySet priorities;
    /// Human-readable reason for Infeasible/Exhausted.
    std::string evidence;
    SynthesisStats stats;
    /// Set when alphabet refinement ran; `priorities` then refer to this model's interactions.
    std::optional<Model> refined;

    [[nodiscard]] bool success() const { return status == Status::Success; }
};

[[nodiscard]] inline const char* status_name(SynthesisResult::Status s)
{
    switch (s) {
    case SynthesisResult::Status::Success:
        return "success";
    case SynthesisResult::Status::Infeasible:
        return "infeasible";
    case SynthesisResult::Status::Exhausted:
        return "exhausted";
    }
    return "unknown";
}

} // namespace dps
