#include "dps/refine.hpp"

#include <algorithm>
#include <map>

namespace dps {

namespace {

/// First participant with more than one source location for sigma, or -1.
ComponentId splitting_participant(const System& s, InteractionId sigma)
{
    for (auto p : s.participants[sigma]) {
        std::set<LocationId> sources;
        for (const auto& t : s.components[p].transitions)
            if (t.label == sigma)
                sources.insert(t.from);
        if (sources.size() > 1)
            return p;
    }
    return -1;
}

} // namespace

std::set<InteractionId> refinable_interactions(const System& s)
{
    std::set<InteractionId> out;
    for (InteractionId sigma = 0; sigma < static_cast<InteractionId>(s.num_interactions()); ++sigma)
        if (splitting_participant(s, sigma) >= 0)
            out.insert(sigma);
    return out;
}

RefinedModel refine_alphabet(const Model& m, const std::set<InteractionId>& selected)
{
    const System& s = m.system;
    RefinedModel r;
    r.model.architecture = m.architecture;
    r.model.risk = m.risk;
    System& out = r.model.system;

    // copies[σ][l] = new id for source location l of the splitting participant.
    std::vector<ComponentId> splitter(s.num_interactions(), -1);
    std::vector<std::map<LocationId, InteractionId>> copies(s.num_interactions());
    std::vector<InteractionId> kept(s.num_interactions(), -1);
    for (InteractionId sigma = 0; sigma < static_cast<InteractionId>(s.num_interactions()); ++sigma) {
        ComponentId p = selected.count(sigma) ? splitting_participant(s, sigma) : -1;
        if (p < 0) {
            kept[sigma] = static_cast<InteractionId>(out.interactions.size());
            out.interactions.push_back(s.interactions[sigma]);
            r.origin.push_back(sigma);
            continue;
        }
        splitter[sigma] = p;
        r.split.insert(sigma);
        std::set<LocationId> sources;
        for (const auto& t : s.components[p].transitions)
            if (t.label == sigma)
                sources.insert(t.from);
        for (auto l : sources) {
            copies[sigma][l] = static_cast<InteractionId>(out.interactions.size());
            out.interactions.push_back(s.interactions[sigma] + "@" + s.components[p].locations[l]);
            r.origin.push_back(sigma);
        }
    }

    auto ids_of = [&](InteractionId sigma) {
        std::vector<InteractionId> ids;
        if (kept[sigma] >= 0)
            ids.push_back(kept[sigma]);
        for (const auto& [l, id] : copies[sigma])
            ids.push_back(id);
        return ids;
    };

    for (std::size_t i = 0; i < s.num_components(); ++i) {
        Component c = s.components[i];
        c.transitions.clear();
        for (const auto& t : s.components[i].transitions) {
            if (kept[t.label] >= 0) {
                Transition nt = t;
                nt.label = kept[t.label];
                c.transitions.push_back(nt);
            } else if (splitter[t.label] == static_cast<ComponentId>(i)) {
                Transition nt = t;
                nt.label = copies[t.label].at(t.from);
                c.transitions.push_back(nt);
            } else {
                for (const auto& [l, id] : copies[t.label]) {
                    Transition nt = t;
                    nt.label = id;
                    c.transitions.push_back(nt);
                }
            }
        }
        out.components.push_back(std::move(c));
    }
    out.rebuild_index();

    for (const auto& [lo, hi] : s.priorities)
        for (auto a : ids_of(lo))
            for (auto b : ids_of(hi))
                out.priorities.emplace(a, b);
    return r;
}

RefinedModel refine_alphabet(const Model& m)
{
    return refine_alphabet(m, refinable_interactions(m.system));
}

} // namespace dps
