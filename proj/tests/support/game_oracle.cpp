#include "game_oracle.hpp"

namespace dps::corpus {

ExplicitGame build_explicit_game(const System& closed, const VisibilityMatrix& vis, const RiskSpec& risk)
{
    ExplicitGame g;
    g.reach = reachable(closed);
    const auto n = g.reach.states.size();
    g.choices.resize(n);
    g.bad.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto& c = g.reach.states[k];
        auto enabled = globally_enabled(closed, c);
        g.bad[k] = enabled.empty() || is_risk(risk, c);
        for (auto sigma : enabled) {
            ExplicitGame::EnvNode e;
            e.config = static_cast<int>(k);
            e.sigma = sigma;
            for (auto tau : enabled)
                if (tau != sigma && vis.visible(tau, sigma))
                    e.visible_alternatives.push_back(tau);
            for (const auto& next : successors(closed, c, sigma))
                e.successors.push_back(g.reach.index.at(next));
            g.choices[k].push_back(static_cast<int>(g.env.size()));
            g.env.push_back(std::move(e));
        }
    }
    return g;
}

ExplicitAttractor explicit_attractor(const ExplicitGame& g, std::vector<bool> seed)
{
    ExplicitAttractor a;
    a.ctrl = std::move(seed);
    a.env.assign(g.env.size(), false);
    for (std::size_t e = 0; e < g.env.size(); ++e)
        a.env[e] = g.bad[g.env[e].config];
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t e = 0; e < g.env.size(); ++e) {
            if (a.env[e])
                continue;
            for (int next : g.env[e].successors)
                if (a.ctrl[next]) {
                    a.env[e] = true;
                    changed = true;
                    break;
                }
        }
        for (std::size_t c = 0; c < g.choices.size(); ++c) {
            if (a.ctrl[c] || g.choices[c].empty())
                continue;
            bool all = true;
            for (int e : g.choices[c])
                all = all && a.env[e];
            if (all) {
                a.ctrl[c] = true;
                changed = true;
            }
        }
    }
    return a;
}

ExplicitAttractor explicit_nested_attractor(const ExplicitGame& g)
{
    std::vector<bool> seed = g.bad;
    while (true) {
        auto a = explicit_attractor(g, seed);
        bool grew = false;
        for (std::size_t c = 0; c < g.choices.size(); ++c) {
            if (a.ctrl[c])
                continue;
            for (int e : g.choices[c])
                if (a.env[e] && g.env[e].visible_alternatives.empty()) {
                    a.ctrl[c] = true;
                    grew = true;
                    break;
                }
        }
        if (!grew)
            return a;
        seed = a.ctrl;
    }
}

} // namespace dps::corpus
