#include "dps/model.hpp"

#include <algorithm>
#include <tuple>

namespace dps {

bool Component::uses(InteractionId sigma) const
{
    return std::binary_search(alphabet.begin(), alphabet.end(), sigma);
}

int Component::location_index(const std::string& loc) const
{
    auto it = std::find(locations.begin(), locations.end(), loc);
    return it == locations.end() ? -1 : static_cast<int>(it - locations.begin());
}

int Component::variable_index(const std::string& var) const
{
    auto it = std::find(variables.begin(), variables.end(), var);
    return it == variables.end() ? -1 : static_cast<int>(it - variables.begin());
}

int System::interaction_index(const std::string& name) const
{
    auto it = std::find(interactions.begin(), interactions.end(), name);
    return it == interactions.end() ? -1 : static_cast<int>(it - interactions.begin());
}

int System::component_index(const std::string& name) const
{
    for (std::size_t i = 0; i < components.size(); ++i)
        if (components[i].name == name)
            return static_cast<int>(i);
    return -1;
}

System System::with_priorities(PrioritySet p) const
{
    System copy = *this;
    copy.priorities = std::move(p);
    return copy;
}

void System::rebuild_index()
{
    participants.assign(interactions.size(), {});
    for (std::size_t i = 0; i < components.size(); ++i) {
        auto& c = components[i];
        std::set<InteractionId> labels;
        for (const auto& t : c.transitions)
            labels.insert(t.label);
        c.alphabet.assign(labels.begin(), labels.end());
        for (auto sigma : c.alphabet)
            participants[sigma].push_back(static_cast<ComponentId>(i));
    }
}

CommArchitecture CommArchitecture::fully_connected(const System& s)
{
    CommArchitecture com;
    for (std::size_t i = 0; i < s.num_components(); ++i)
        for (std::size_t j = 0; j < s.num_components(); ++j)
            com.informs.emplace(static_cast<int>(i), static_cast<int>(j));
    return com;
}

CommArchitecture CommArchitecture::mandated(const System& s)
{
    CommArchitecture com;
    for (std::size_t i = 0; i < s.num_components(); ++i)
        com.informs.emplace(static_cast<int>(i), static_cast<int>(i));
    for (const auto& members : s.participants)
        for (auto a : members)
            for (auto b : members)
                com.informs.emplace(a, b);
    for (const auto& [low, high] : s.priorities)
        for (auto hi_comp : s.participants[high])
            for (auto lo_comp : s.participants[low])
                com.informs.emplace(hi_comp, lo_comp);
    return com;
}

PrioritySet transitive_closure(const PrioritySet& p)
{
    // Warshall over the interactions that occur in p.
    std::vector<InteractionId> ids;
    for (const auto& [a, b] : p) {
        ids.push_back(a);
        ids.push_back(b);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    const std::size_t n = ids.size();
    auto pos = [&](InteractionId x) {
        return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), x) - ids.begin());
    };
    std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
    for (const auto& [a, b] : p)
        m[pos(a)][pos(b)] = true;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (m[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (m[k][j])
                        m[i][j] = true;
    PrioritySet out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (m[i][j])
                out.emplace(ids[i], ids[j]);
    return out;
}

bool satisfy_irreflexivity(const PrioritySet& p)
{
    return std::none_of(p.begin(), p.end(), [](const Priority& q) { return q.first == q.second; });
}

std::string condition_name(DeployabilityViolation::Condition c)
{
    switch (c) {
    case DeployabilityViolation::Condition::SelfTransmission:
        return "self-transmission";
    case DeployabilityViolation::Condition::GroupTransmission:
        return "group transmission";
    case DeployabilityViolation::Condition::ExistingPriorityTransmission:
        return "existing priority transmission";
    }
    return "unknown";
}

std::string priority_name(const System& s, const Priority& p)
{
    return s.interactions[p.first] + " < " + s.interactions[p.second];
}

DeployabilityVerdict is_deployable(const System& s, const CommArchitecture& com)
{
    using Cond = DeployabilityViolation::Condition;
    DeployabilityVerdict v;
    std::set<std::tuple<int, int, int>> seen;
    auto report = [&](Cond c, ComponentId from, ComponentId to, std::string detail) {
        if (!seen.emplace(static_cast<int>(c), from, to).second)
            return;
        v.deployable = false;
        v.violations.push_back({c, from, to, std::move(detail)});
    };

    for (std::size_t i = 0; i < s.num_components(); ++i) {
        auto c = static_cast<ComponentId>(i);
        if (!com.has(c, c))
            report(Cond::SelfTransmission, c, c, s.components[i].name + " does not inform itself");
    }
    for (std::size_t sigma = 0; sigma < s.participants.size(); ++sigma) {
        const auto& members = s.participants[sigma];
        for (auto a : members)
            for (auto b : members)
                if (a != b && !com.has(a, b))
                    report(Cond::GroupTransmission, a, b,
                           s.components[a].name + " -> " + s.components[b].name + " needed by shared interaction " +
                               s.interactions[sigma]);
    }
    for (const auto& [low, high] : s.priorities)
        for (auto hi_comp : s.participants[high])
            for (auto lo_comp : s.participants[low])
                if (!com.has(hi_comp, lo_comp))
                    report(Cond::ExistingPriorityTransmission, hi_comp, lo_comp,
                           s.components[hi_comp].name + " -> " + s.components[lo_comp].name + " needed by priority " +
                               priority_name(s, {low, high}));
    return v;
}

bool satisfy_arch_constraint(const PrioritySet& p, const System& s, const CommArchitecture& com)
{
    for (const auto& [low, high] : p)
        for (auto hi_comp : s.participants[high])
            for (auto lo_comp : s.participants[low])
                if (!com.has(hi_comp, lo_comp))
                    return false;
    return true;
}

VisibilityMatrix visibility_matrix(const System& s, const CommArchitecture& com)
{
    const std::size_t n = s.num_interactions();
    VisibilityMatrix vis(n);
    for (std::size_t tau = 0; tau < n; ++tau)
        for (std::size_t sigma = 0; sigma < n; ++sigma) {
            bool ok = true;
            for (auto i : s.participants[tau]) {
                for (auto j : s.participants[sigma])
                    if (!com.has(i, j)) {
                        ok = false;
                        break;
                    }
                if (!ok)
                    break;
            }
            vis.set(static_cast<int>(tau), static_cast<int>(sigma), ok);
        }
    return vis;
}

ControllerTables project_controllers(const PrioritySet& p, const System& s)
{
    ControllerTables tables(s.num_components());
    for (const auto& pr : p)
        for (auto c : s.participants[pr.first])
            tables[c].push_back(pr);
    return tables;
}

} // namespace dps
