#include "dps/model.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace dps {

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

[[noreturn]] void fail(ModelError::Kind kind, const std::string& msg)
{
    throw ModelError(kind, msg);
}

[[noreturn]] void reference_error(const std::string& msg)
{
    fail(ModelError::Kind::Reference, "reference error: " + msg);
}

[[noreturn]] void validation_error(const std::string& msg)
{
    fail(ModelError::Kind::Validation, "validation error: " + msg);
}

std::string line_column(const std::string& text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

Expr parse_expr(const Json& j, const std::string& where)
{
    if (j.is_boolean())
        return Expr::constant(j.get<bool>());
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "true")
            return Expr::constant(true);
        if (s == "false")
            return Expr::constant(false);
        return Expr::atom(s);
    }
    if (j.is_array() && !j.empty() && j[0].is_string()) {
        auto op = j[0].get<std::string>();
        std::vector<Expr> kids;
        for (std::size_t i = 1; i < j.size(); ++i)
            kids.push_back(parse_expr(j[i], where));
        if (op == "not") {
            if (kids.size() != 1)
                validation_error(where + ": \"not\" takes exactly one operand");
            return Expr::negate(std::move(kids.front()));
        }
        if (op == "and")
            return Expr::conj(std::move(kids));
        if (op == "or")
            return Expr::disj(std::move(kids));
        validation_error(where + ": unknown operator \"" + op + "\"");
    }
    validation_error(where + ": malformed expression " + j.dump());
}

OrderedJson emit_expr(const Expr& e)
{
    switch (e.kind) {
    case Expr::Kind::Const:
        return e.value;
    case Expr::Kind::Atom:
        return e.text;
    case Expr::Kind::Not:
    case Expr::Kind::And:
    case Expr::Kind::Or: {
        OrderedJson arr = OrderedJson::array();
        arr.push_back(e.kind == Expr::Kind::Not ? "not" : e.kind == Expr::Kind::And ? "and" : "or");
        for (const auto& k : e.kids)
            arr.push_back(emit_expr(k));
        return arr;
    }
    }
    return false;
}

const Json& require(const Json& obj, const char* key, const std::string& where)
{
    auto it = obj.find(key);
    if (it == obj.end())
        reference_error(where + ": missing \"" + key + "\"");
    return *it;
}

std::string require_string(const Json& obj, const char* key, const std::string& where)
{
    const auto& v = require(obj, key, where);
    if (!v.is_string())
        validation_error(where + ": \"" + key + "\" must be a string");
    return v.get<std::string>();
}

void resolve_guard(Expr& guard, const Component& c, const std::string& where)
{
    guard.for_each_atom([&](Expr& a) {
        int idx = c.variable_index(a.text);
        if (idx < 0)
            reference_error(where + ": guard references unknown variable \"" + a.text + "\"");
        a.index = idx;
        a.is_location = false;
    });
}

Component parse_component(const Json& j, System& sys, std::size_t ordinal)
{
    std::string where = "component #" + std::to_string(ordinal);
    if (!j.is_object())
        validation_error(where + ": expected an object");
    Component c;
    c.name = require_string(j, "name", where);
    where = "component " + c.name;

    const auto& locs = require(j, "locations", where);
    if (!locs.is_array())
        validation_error(where + ": \"locations\" must be an array");
    for (const auto& l : locs)
        c.locations.push_back(l.get<std::string>());

    if (auto it = j.find("variables"); it != j.end())
        for (const auto& v : *it)
            c.variables.push_back(v.get<std::string>());

    auto init_loc = require_string(j, "initialLocation", where);
    c.initial_location = c.location_index(init_loc);
    if (c.initial_location < 0)
        reference_error(where + ": unknown initial location \"" + init_loc + "\"");

    if (auto it = j.find("initialValuation"); it != j.end()) {
        for (const auto& [var, val] : it->items()) {
            int idx = c.variable_index(var);
            if (idx < 0)
                reference_error(where + ": initial valuation of unknown variable \"" + var + "\"");
            if (val.get<bool>())
                c.initial_valuation |= (std::uint64_t{1} << idx);
        }
        for (const auto& v : c.variables)
            if (!it->contains(v))
                validation_error(where + ": initial valuation misses variable \"" + v + "\"");
    } else if (!c.variables.empty()) {
        reference_error(where + ": missing \"initialValuation\"");
    }

    const auto& trans = require(j, "transitions", where);
    std::size_t k = 0;
    for (const auto& tj : trans) {
        std::string twhere = where + ", transition #" + std::to_string(k++);
        Transition t;
        auto from = require_string(tj, "from", twhere);
        auto to = require_string(tj, "to", twhere);
        auto label = require_string(tj, "label", twhere);
        t.from = c.location_index(from);
        t.to = c.location_index(to);
        if (t.from < 0)
            reference_error(twhere + ": unknown location \"" + from + "\"");
        if (t.to < 0)
            reference_error(twhere + ": unknown location \"" + to + "\"");
        int sigma = sys.interaction_index(label);
        if (sigma < 0) {
            sigma = static_cast<int>(sys.interactions.size());
            sys.interactions.push_back(label);
        }
        t.label = sigma;
        if (auto it = tj.find("guard"); it != tj.end())
            t.guard = parse_expr(*it, twhere);
        resolve_guard(t.guard, c, twhere);

        t.update.assign(c.variables.size(), 0);
        std::vector<bool> seen(c.variables.size(), false);
        if (auto it = tj.find("update"); it != tj.end()) {
            for (const auto& [var, vals] : it->items()) {
                int idx = c.variable_index(var);
                if (idx < 0)
                    reference_error(twhere + ": update of unknown variable \"" + var + "\"");
                std::uint8_t img = 0;
                for (const auto& v : vals)
                    img |= v.get<bool>() ? kUpdateTrue : kUpdateFalse;
                if (img == 0)
                    validation_error(twhere + ": empty-image update relation for \"" + var + "\"");
                t.update[idx] = img;
                seen[idx] = true;
            }
        }
        for (std::size_t v = 0; v < c.variables.size(); ++v)
            if (!seen[v])
                validation_error(twhere + ": update relation misses variable \"" + c.variables[v] + "\"");
        c.transitions.push_back(std::move(t));
    }
    return c;
}

} // namespace

void resolve_risk(Expr& e, const System& s)
{
    e.for_each_atom([&](Expr& a) {
        auto at = a.text.find('@');
        auto dot = a.text.find('.');
        if (at != std::string::npos) {
            int comp = s.component_index(a.text.substr(0, at));
            if (comp < 0)
                reference_error("risk atom \"" + a.text + "\" names an unknown component");
            int loc = s.components[comp].location_index(a.text.substr(at + 1));
            if (loc < 0)
                reference_error("risk atom \"" + a.text + "\" names an unknown location");
            a.component = comp;
            a.index = loc;
            a.is_location = true;
        } else if (dot != std::string::npos) {
            int comp = s.component_index(a.text.substr(0, dot));
            if (comp < 0)
                reference_error("risk atom \"" + a.text + "\" names an unknown component");
            int var = s.components[comp].variable_index(a.text.substr(dot + 1));
            if (var < 0)
                reference_error("risk atom \"" + a.text + "\" names an unknown variable");
            a.component = comp;
            a.index = var;
            a.is_location = false;
        } else {
            reference_error("risk atom \"" + a.text + "\" is neither Comp@Loc nor Comp.var");
        }
    });
}

void validate_system(const System& s)
{
    if (s.components.empty())
        validation_error("a system needs at least one component");
    std::set<std::string> names;
    for (const auto& c : s.components) {
        if (!names.insert(c.name).second)
            validation_error("duplicate component name \"" + c.name + "\"");
        if (c.locations.empty())
            validation_error("component " + c.name + " has no locations");
        std::set<std::string> locs(c.locations.begin(), c.locations.end());
        if (locs.size() != c.locations.size())
            validation_error("component " + c.name + " has duplicate locations");
        std::set<std::string> vars(c.variables.begin(), c.variables.end());
        if (vars.size() != c.variables.size())
            validation_error("component " + c.name + " has duplicate variables");
        if (c.variables.size() > 64)
            validation_error("component " + c.name + " has more than 64 variables");
        if (c.transitions.empty())
            validation_error("component " + c.name + " has an empty alphabet");
        for (const auto& t : c.transitions) {
            if (t.update.size() != c.variables.size())
                validation_error("component " + c.name + ": update relation domain differs from its variables");
            for (auto img : t.update)
                if (img == 0)
                    validation_error("component " + c.name + ": empty-image update relation");
        }
    }
    std::set<std::string> labels(s.interactions.begin(), s.interactions.end());
    if (labels.size() != s.interactions.size())
        validation_error("duplicate interaction names");
    for (std::size_t sigma = 0; sigma < s.participants.size(); ++sigma)
        if (s.participants[sigma].empty())
            validation_error("interaction " + s.interactions[sigma] + " is used by no component");
    for (const auto& [low, high] : s.priorities)
        if (low < 0 || high < 0 || static_cast<std::size_t>(low) >= s.num_interactions() ||
            static_cast<std::size_t>(high) >= s.num_interactions())
            reference_error("priority references an unknown interaction");
}

Model parse_model(const std::string& text)
{
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ModelError::Kind::Syntax, "syntax error at " + line_column(text, e.byte == 0 ? 0 : e.byte - 1) + ": " +
                                           e.what());
    }
    if (!doc.is_object())
        fail(ModelError::Kind::Syntax, "syntax error: model document must be a JSON object");

    Model m;
    try {
        const auto& comps = require(doc, "components", "model");
        std::size_t k = 0;
        for (const auto& cj : comps)
            m.system.components.push_back(parse_component(cj, m.system, k++));
        m.system.rebuild_index();

        if (auto it = doc.find("priorities"); it != doc.end())
            for (const auto& pj : *it) {
                if (!pj.is_array() || pj.size() != 2)
                    validation_error("priority entries must be [\"low\", \"high\"] pairs");
                auto low = pj[0].get<std::string>();
                auto high = pj[1].get<std::string>();
                int l = m.system.interaction_index(low);
                int h = m.system.interaction_index(high);
                if (l < 0 || h < 0)
                    reference_error("priority " + low + " < " + high + " references an unknown interaction");
                m.system.priorities.emplace(l, h);
            }

        if (auto it = doc.find("architecture"); it != doc.end())
            for (const auto& aj : *it) {
                if (!aj.is_array() || aj.size() != 2)
                    validation_error("architecture entries must be [\"informer\", \"informee\"] pairs");
                auto from = aj[0].get<std::string>();
                auto to = aj[1].get<std::string>();
                int f = m.system.component_index(from);
                int t = m.system.component_index(to);
                if (f < 0 || t < 0)
                    reference_error("architecture pair (" + from + ", " + to + ") names an unknown component");
                m.architecture.informs.emplace(f, t);
            }

        if (auto it = doc.find("risk"); it != doc.end())
            m.risk.predicate = parse_expr(*it, "risk");
        resolve_risk(m.risk.predicate, m.system);
    } catch (const nlohmann::json::exception& e) {
        fail(ModelError::Kind::Validation, std::string("validation error: ") + e.what());
    }
    validate_system(m.system);
    return m;
}

Model load_model(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

std::string emit_model(const Model& m)
{
    const auto& s = m.system;
    OrderedJson doc;
    OrderedJson comps = OrderedJson::array();
    for (const auto& c : s.components) {
        OrderedJson cj;
        cj["name"] = c.name;
        cj["locations"] = c.locations;
        cj["variables"] = c.variables;
        cj["initialLocation"] = c.locations[c.initial_location];
        OrderedJson init = OrderedJson::object();
        for (std::size_t v = 0; v < c.variables.size(); ++v)
            init[c.variables[v]] = ((c.initial_valuation >> v) & 1U) != 0;
        cj["initialValuation"] = init;
        OrderedJson trans = OrderedJson::array();
        for (const auto& t : c.transitions) {
            OrderedJson tj;
            tj["from"] = c.locations[t.from];
            tj["to"] = c.locations[t.to];
            tj["label"] = s.interactions[t.label];
            tj["guard"] = emit_expr(t.guard);
            OrderedJson upd = OrderedJson::object();
            for (std::size_t v = 0; v < c.variables.size(); ++v) {
                OrderedJson vals = OrderedJson::array();
                if (t.update[v] & kUpdateFalse)
                    vals.push_back(false);
                if (t.update[v] & kUpdateTrue)
                    vals.push_back(true);
                upd[c.variables[v]] = vals;
            }
            tj["update"] = upd;
            trans.push_back(tj);
        }
        cj["transitions"] = trans;
        comps.push_back(cj);
    }
    doc["components"] = comps;
    OrderedJson pri = OrderedJson::array();
    for (const auto& [l, h] : s.priorities)
        pri.push_back({s.interactions[l], s.interactions[h]});
    doc["priorities"] = pri;
    OrderedJson arch = OrderedJson::array();
    for (const auto& [f, t] : m.architecture.informs)
        arch.push_back({s.components[f].name, s.components[t].name});
    doc["architecture"] = arch;
    doc["risk"] = emit_expr(m.risk.predicate);
    return doc.dump(2) + "\n";
}

} // namespace dps
