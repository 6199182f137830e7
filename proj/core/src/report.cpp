#include "dps/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace dps {

namespace {

using OrderedJson = nlohmann::ordered_json;

const Model& target_model(const Model& m, const SynthesisResult& r)
{
    return r.refined ? *r.refined : m;
}

OrderedJson priority_pair(const System& s, const Priority& p)
{
    return OrderedJson::array({s.interactions[static_cast<std::size_t>(p.first)],
                               s.interactions[static_cast<std::size_t>(p.second)]});
}

std::string rule_text(const System& s, const Priority& p)
{
    return "(" + s.interactions[static_cast<std::size_t>(p.first)] + " < " +
           s.interactions[static_cast<std::size_t>(p.second)] + ")";
}

OrderedJson config_json(const System& s, const Configuration& c)
{
    OrderedJson j = OrderedJson::object();
    for (std::size_t i = 0; i < s.num_components(); ++i) {
        const auto& comp = s.components[i];
        j[comp.name] = comp.locations[static_cast<std::size_t>(c.loc[i])];
        for (std::size_t v = 0; v < comp.variables.size(); ++v)
            j[comp.name + "." + comp.variables[v]] = ((c.val[i] >> v) & 1U) != 0;
    }
    return j;
}

OrderedJson names(const System& s, const std::vector<InteractionId>& ids)
{
    OrderedJson a = OrderedJson::array();
    for (auto k : ids)
        a.push_back(s.interactions[static_cast<std::size_t>(k)]);
    return a;
}

[[noreturn]] void bad_result(const std::string& msg)
{
    throw ModelError(ModelError::Kind::Validation, "result document: " + msg);
}

} // namespace

std::string result_json(const Model& m, const SynthesisResult& r, const ReportOptions& opts)
{
    const Model& t = target_model(m, r);
    const System& s = t.system;
    OrderedJson doc;
    doc["status"] = status_name(r.status);
    if (!r.success())
        doc["evidence"] = r.evidence;
    OrderedJson pri = OrderedJson::array();
    for (const auto& p : r.priorities)
        pri.push_back(priority_pair(s, p));
    doc["priorities"] = pri;
    OrderedJson ctl = OrderedJson::object();
    auto tables = project_controllers(r.priorities, s);
    for (std::size_t i = 0; i < s.num_components(); ++i) {
        OrderedJson rules = OrderedJson::array();
        for (const auto& p : tables[i])
            rules.push_back(priority_pair(s, p));
        ctl[s.components[i].name] = rules;
    }
    doc["controllers"] = ctl;
    OrderedJson st;
    st["outerIters"] = r.stats.outer_iters;
    st["innerIters"] = r.stats.inner_iters;
    st["satCalls"] = r.stats.sat_calls;
    st["nodes"] = r.stats.nodes;
    st["fixesTried"] = r.stats.fixes_tried;
    st["refinements"] = r.stats.refinements;
    if (opts.timing)
        st["timeMs"] = r.stats.time_ms;
    doc["stats"] = st;
    if (r.refined)
        doc["model"] = OrderedJson::parse(emit_model(*r.refined));
    return doc.dump(2) + "\n";
}

std::string result_table(const Model& m, const SynthesisResult& r)
{
    const System& s = target_model(m, r).system;
    std::ostringstream os;
    os << "status: " << status_name(r.status) << "\n";
    if (!r.success()) {
        os << "reason: " << r.evidence << "\n";
        return os.str();
    }
    auto tables = project_controllers(r.priorities, s);
    std::vector<std::vector<std::string>> cols;
    for (std::size_t i = 0; i < s.num_components(); ++i) {
        if (tables[i].empty())
            continue;
        std::vector<std::string> col{"Controller " + s.components[i].name};
        for (const auto& p : tables[i])
            col.push_back(rule_text(s, p));
        cols.push_back(std::move(col));
    }
    if (cols.empty()) {
        os << "no new priorities; every controller is unrestricted\n";
        return os.str();
    }
    constexpr std::size_t kColumnsPerBlock = 4;
    for (std::size_t first = 0; first < cols.size(); first += kColumnsPerBlock) {
        const std::size_t last = std::min(cols.size(), first + kColumnsPerBlock);
        std::vector<std::size_t> width;
        std::size_t rows = 0;
        for (std::size_t k = first; k < last; ++k) {
            std::size_t w = 0;
            for (const auto& cell : cols[k])
                w = std::max(w, cell.size());
            width.push_back(w);
            rows = std::max(rows, cols[k].size());
        }
        auto line = [&](std::size_t row) {
            std::string out;
            for (std::size_t k = first; k < last; ++k) {
                std::string cell = row < cols[k].size() ? cols[k][row] : "";
                cell.resize(width[k - first], ' ');
                out += (k == first ? "| " : " | ") + cell;
            }
            return out + " |\n";
        };
        if (first > 0)
            os << "\n";
        os << line(0);
        std::string sep;
        for (std::size_t k = 0; k < width.size(); ++k)
            sep += (k == 0 ? "|-" : "-|-") + std::string(width[k], '-');
        os << sep << "-|\n";
        for (std::size_t row = 1; row < rows; ++row)
            os << line(row);
    }
    std::size_t unrestricted = 0;
    for (const auto& t : tables)
        unrestricted += t.empty() ? 1 : 0;
    if (unrestricted > 0)
        os << unrestricted << " controller(s) unrestricted\n";
    return os.str();
}

LoadedResult parse_result(const std::string& text, const Model& m)
{
    OrderedJson doc;
    try {
        doc = OrderedJson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ModelError(ModelError::Kind::Syntax, std::string("result document: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("status") || !doc["status"].is_string())
        bad_result("missing \"status\"");
    LoadedResult out;
    const auto status = doc["status"].get<std::string>();
    if (status == "success")
        out.status = SynthesisResult::Status::Success;
    else if (status == "infeasible")
        out.status = SynthesisResult::Status::Infeasible;
    else if (status == "exhausted")
        out.status = SynthesisResult::Status::Exhausted;
    else
        bad_result("unknown status \"" + status + "\"");
    out.model = doc.contains("model") ? parse_model(doc["model"].dump()) : m;
    const System& s = out.model.system;
    if (!doc.contains("priorities") || !doc["priorities"].is_array())
        bad_result("missing \"priorities\"");
    for (const auto& pair : doc["priorities"]) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string())
            bad_result("priorities must be [\"low\", \"high\"] pairs");
        const int lo = s.interaction_index(pair[0].get<std::string>());
        const int hi = s.interaction_index(pair[1].get<std::string>());
        if (lo < 0 || hi < 0)
            throw ModelError(ModelError::Kind::Reference,
                             "result document: unknown interaction in " + pair.dump());
        out.priorities.insert({lo, hi});
    }
    return out;
}

std::string verdict_json(const System& s, const Verdict& v)
{
    OrderedJson doc;
    switch (v.kind) {
    case Verdict::Kind::Safe:
        doc["verdict"] = "safe";
        break;
    case Verdict::Kind::Deadlock:
        doc["verdict"] = "deadlock";
        break;
    case Verdict::Kind::Risk:
        doc["verdict"] = "risk";
        break;
    }
    if (!v.safe()) {
        OrderedJson w = OrderedJson::array();
        for (const auto& c : v.witness)
            w.push_back(config_json(s, c));
        doc["witness"] = w;
        doc["labels"] = names(s, v.witness_labels);
    }
    return doc.dump(2) + "\n";
}

std::string validation_json(const ValidationReport& v)
{
    OrderedJson doc;
    doc["valid"] = v.ok();
    doc["closedIrreflexive"] = v.closed_irreflexive;
    doc["deployable"] = v.deployable;
    doc["safe"] = v.safe;
    doc["explicitCheck"] = v.explicit_check;
    doc["simulation"] = v.simulation_ok;
    doc["failures"] = v.failures;
    return doc.dump(2) + "\n";
}

std::string trace_jsonl(const System& s, const Trace& t)
{
    std::string out;
    for (const auto& step : t.steps) {
        OrderedJson rec;
        rec["config"] = config_json(s, step.config);
        if (step.chosen)
            rec["chosen"] = s.interactions[static_cast<std::size_t>(*step.chosen)];
        else
            rec["chosen"] = nullptr;
        rec["enabledSet"] = names(s, step.enabled);
        out += rec.dump() + "\n";
    }
    return out;
}

} // namespace dps
