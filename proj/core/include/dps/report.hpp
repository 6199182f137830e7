#pragma once

#include "dps/engine.hpp"
#include "dps/explicit_semantics.hpp"

#include <string>

namespace dps {

struct ReportOptions {
    /// Adds stats.timeMs; off by default so that repeated runs produce identical documents.
    bool timing = false;
};

/// Result document: {status, evidence?, priorities, controllers, stats, model?}. Priorities are
/// [low, high] name pairs; controllers list each component's rules (empty = unrestricted).
/// When alphabet refinement ran, the refined model is embedded under "model".
[[nodiscard]] std::string result_json(const Model& m, const SynthesisResult& r, const ReportOptions& opts = {});

/// Controller table with one column per restricted component.
[[nodiscard]] std::string result_table(const Model& m, const SynthesisResult& r);

/// A result document read back: the model its priorities refer to and the priorities themselves.
struct LoadedResult {
    SynthesisResult::Status status = SynthesisResult::Status::Exhausted;
    Model model;
    PrioritySet priorities;
};

/// Parses a result document against the model it was computed for; throws ModelError on
/// malformed input or unknown interaction names.
[[nodiscard]] LoadedResult parse_result(const std::string& text, const Model& m);

[[nodiscard]] std::string verdict_json(const System& s, const Verdict& v);
[[nodiscard]] std::string validation_json(const ValidationReport& v);

/// One JSON object per line and step: {config, chosen, enabledSet}.
[[nodiscard]] std::string trace_jsonl(const System& s, const Trace& t);

} // namespace dps
