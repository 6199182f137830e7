#include "dps/fixer.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace dps {

using bdd::Bdd;
using bdd::Var;

namespace {

/// Calls fn for every total assignment of `vars` (ascending) satisfying f; f's support must lie within vars.
void for_each_minterm(const bdd::Manager& m, const Bdd& f, const std::vector<Var>& vars,
                      const std::function<void(const std::vector<bool>&)>& fn)
{
    m.for_each_cube(f, [&](const bdd::Cube& cube) {
        std::vector<int> fixed(vars.size(), -1);
        for (const auto& [v, pos] : cube) {
            auto it = std::lower_bound(vars.begin(), vars.end(), v);
            if (it != vars.end() && *it == v)
                fixed[it - vars.begin()] = pos ? 1 : 0;
        }
        std::vector<std::size_t> free;
        for (std::size_t k = 0; k < vars.size(); ++k)
            if (fixed[k] < 0)
                free.push_back(k);
        std::vector<bool> value(vars.size());
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << free.size()); ++bits) {
            for (std::size_t k = 0; k < vars.size(); ++k)
                value[k] = fixed[k] == 1;
            for (std::size_t k = 0; k < free.size(); ++k)
                value[free[k]] = ((bits >> k) & 1U) != 0;
            fn(value);
        }
        return true;
    });
}

} // namespace

std::vector<RiskEdgeCube> extract_candidates(const GameContext& ctx, const Bdd& t_f)
{
    std::vector<RiskEdgeCube> out;
    if (t_f.is_false())
        return out;
    auto& m = *ctx.mgr;

    std::vector<Var> signature_vars;
    for (auto v : ctx.code)
        signature_vars.push_back(GameContext::prime(v));
    for (auto v : ctx.vis)
        signature_vars.push_back(GameContext::prime(v));
    std::sort(signature_vars.begin(), signature_vars.end());

    std::vector<Var> drop = ctx.unprimed;
    for (auto v : ctx.primed)
        if (!std::binary_search(signature_vars.begin(), signature_vars.end(), v))
            drop.push_back(v);
    Bdd signatures = m.exists(t_f, std::span<const Var>(drop));

    const auto n = static_cast<InteractionId>(ctx.num_interactions);
    std::map<std::pair<InteractionId, std::vector<InteractionId>>, Bdd> groups;
    for_each_minterm(m, signatures, signature_vars, [&](const std::vector<bool>& value) {
        Bdd pattern = m.mk_true();
        InteractionId sigma = 0;
        for (std::size_t k = 0; k < signature_vars.size(); ++k) {
            const Var v = signature_vars[k];
            pattern &= value[k] ? m.mk_var(v) : m.mk_nvar(v);
            auto code_it = std::find(ctx.code.begin(), ctx.code.end(), v - 1);
            if (code_it != ctx.code.end() && value[k])
                sigma |= 1 << (code_it - ctx.code.begin());
        }
        std::vector<InteractionId> alternatives;
        for (InteractionId tau = 0; tau < n; ++tau) {
            if (tau == sigma)
                continue;
            const Var v = GameContext::prime(ctx.vis[tau]);
            auto it = std::lower_bound(signature_vars.begin(), signature_vars.end(), v);
            if (value[it - signature_vars.begin()])
                alternatives.push_back(tau);
        }
        Bdd sources = project_configs(ctx, m.exists(t_f & pattern, ctx.primed_cube));
        auto key = std::make_pair(sigma, std::move(alternatives));
        auto [it, inserted] = groups.try_emplace(key, sources);
        if (!inserted)
            it->second |= sources;
    });

    for (auto& [key, sources] : groups) {
        RiskEdgeCube c;
        c.sigma = key.first;
        c.alternatives = key.second;
        c.sources = sources;
        c.num_sources = m.sat_count(sources, std::span<const Var>(ctx.config_vars));
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<sat::Lit> FixFormula::assumptions() const
{
    std::vector<sat::Lit> a;
    for (const auto& [sel, p] : unit_selector)
        a.push_back(sel);
    for (auto sel : cube_selector)
        a.push_back(sel);
    std::sort(a.begin(), a.end());
    return a;
}

PrioritySet FixFormula::true_priorities() const
{
    PrioritySet out;
    for (const auto& [p, v] : var_of)
        if (solver.value(v))
            out.insert(p);
    return out;
}

FixFormula compile_clauses(std::vector<RiskEdgeCube> cubes, const PrioritySet& existing, const VisibilityMatrix& vis,
                           const PrioritySet& forbidden)
{
    FixFormula f;
    f.cubes = std::move(cubes);
    f.existing = existing;
    f.forbidden = forbidden;

    std::set<InteractionId> used;
    for (const auto& c : f.cubes) {
        used.insert(c.sigma);
        used.insert(c.alternatives.begin(), c.alternatives.end());
    }
    for (const auto& [lo, hi] : existing) {
        used.insert(lo);
        used.insert(hi);
    }
    f.used.assign(used.begin(), used.end());

    auto& s = f.solver;
    // Selectors first so that their indices do not depend on the alphabet size.
    for (std::size_t k = 0; k < f.cubes.size(); ++k)
        f.cube_selector.push_back(s.new_var());
    std::vector<int> existing_sel, forbidden_sel;
    for (const auto& p : existing) {
        existing_sel.push_back(s.new_var());
        f.unit_selector[existing_sel.back()] = p;
    }
    std::vector<Priority> forbidden_used;
    for (const auto& p : forbidden)
        if (used.count(p.first) && used.count(p.second)) {
            forbidden_used.push_back(p);
            forbidden_sel.push_back(s.new_var());
            f.unit_selector[forbidden_sel.back()] = p;
        }
    for (auto a : f.used)
        for (auto b : f.used)
            f.var_of[{a, b}] = s.new_var();
    auto x = [&](InteractionId a, InteractionId b) { return f.var_of.at({a, b}); };

    for (std::size_t k = 0; k < f.cubes.size(); ++k) {
        sat::Clause c{-f.cube_selector[k]};
        for (auto tau : f.cubes[k].alternatives)
            c.push_back(x(f.cubes[k].sigma, tau));
        s.add_clause(c);
        ++f.counts.candidates;
    }
    std::size_t k = 0;
    for (const auto& [lo, hi] : existing) {
        s.add_clause({-existing_sel[k++], x(lo, hi)});
        ++f.counts.existing;
    }
    for (std::size_t j = 0; j < forbidden_used.size(); ++j) {
        s.add_clause({-forbidden_sel[j], -x(forbidden_used[j].first, forbidden_used[j].second)});
        ++f.counts.forbidden;
    }
    for (auto a : f.used) {
        s.add_clause({-x(a, a)});
        ++f.counts.irreflexive;
    }
    for (auto a : f.used)
        for (auto b : f.used) {
            if (a == b)
                continue;
            for (auto c : f.used) {
                if (c == b)
                    continue;
                s.add_clause({-x(a, b), -x(b, c), x(a, c)});
                ++f.counts.transitivity;
            }
        }
    for (auto a : f.used)
        for (auto b : f.used) {
            if (a == b || vis.visible(b, a))
                continue;
            s.add_clause({-x(a, b)});
            ++f.counts.architectural;
            for (auto c : f.used) {
                if (c == a || c == b || !vis.visible(c, a) || !vis.visible(b, c))
                    continue;
                s.add_clause({-x(a, c), -x(c, b)});
                ++f.counts.communication;
            }
        }
    return f;
}

namespace {

void validate_model(const PrioritySet& chosen, const VisibilityMatrix& vis)
{
    if (transitive_closure(chosen) != chosen)
        throw std::logic_error("fix model is not transitively closed");
    if (!satisfy_irreflexivity(chosen))
        throw std::logic_error("fix model is not irreflexive");
    for (const auto& [lo, hi] : chosen)
        if (!vis.visible(hi, lo))
            throw std::logic_error("fix model violates the architectural constraint");
}

FixOutcome fixed_outcome(const FixFormula& f, const sat::Solver& solved, const VisibilityMatrix& vis)
{
    FixOutcome out;
    out.kind = FixOutcome::Kind::Fixed;
    PrioritySet chosen;
    for (const auto& [p, v] : f.var_of)
        if (solved.value(v))
            chosen.insert(p);
    validate_model(chosen, vis);
    for (const auto& p : chosen)
        if (!f.existing.count(p))
            out.priorities.insert(p);
    return out;
}

} // namespace

FixOutcome resolve_fix(FixFormula& f, const VisibilityMatrix& vis, const ResolveOptions& opts)
{
    const auto solves_before = f.solver.stats().solves;
    const auto assumptions = f.assumptions();
    FixOutcome out;

    if (f.solver.solve(assumptions) == sat::Result::Sat) {
        if (opts.min_cardinality) {
            std::vector<sat::Lit> fresh;
            for (const auto& [p, v] : f.var_of)
                if (p.first != p.second && !f.existing.count(p) && vis.visible(p.second, p.first))
                    fresh.push_back(v);
            const auto upper = static_cast<int>(fixed_outcome(f, f.solver, vis).priorities.size());
            for (int bound = 0; bound < upper; ++bound) {
                sat::Solver bounded = f.solver;
                sat::add_at_most_k(bounded, fresh, bound);
                out.sat_calls += 1;
                if (bounded.solve(assumptions) == sat::Result::Sat) {
                    auto r = fixed_outcome(f, bounded, vis);
                    r.sat_calls = out.sat_calls + (f.solver.stats().solves - solves_before);
                    return r;
                }
            }
        }
        auto r = fixed_outcome(f, f.solver, vis);
        r.sat_calls = out.sat_calls + (f.solver.stats().solves - solves_before);
        return r;
    }

    out.kind = FixOutcome::Kind::NoFix;
    out.core = sat::minimize_core(f.solver, f.solver.core());
    std::sort(out.core.begin(), out.core.end());

    std::set<Priority> mentioned;
    for (auto sel : out.core) {
        auto unit = f.unit_selector.find(sel);
        if (unit != f.unit_selector.end()) {
            if (f.existing.count(unit->second))
                mentioned.insert(unit->second);
            continue;
        }
        auto it = std::find(f.cube_selector.begin(), f.cube_selector.end(), sel);
        if (it == f.cube_selector.end())
            continue;
        const auto& cube = f.cubes[it - f.cube_selector.begin()];
        out.refinement_candidates.insert(cube.sigma);
        for (auto tau : cube.alternatives)
            mentioned.insert({cube.sigma, tau});
    }
    for (const auto& [a, b] : mentioned)
        if (a < b && mentioned.count({b, a}))
            out.guidance.push_back({a, b});
    out.sat_calls = f.solver.stats().solves - solves_before;
    return out;
}

bool satisfies_formula(const FixFormula& f, const PrioritySet& assignment)
{
    std::vector<bool> value(static_cast<std::size_t>(f.solver.num_vars()) + 1, false);
    for (auto sel : f.cube_selector)
        value[sel] = true;
    for (const auto& [sel, p] : f.unit_selector)
        value[sel] = true;
    for (const auto& [p, v] : f.var_of)
        value[v] = assignment.count(p) != 0;
    for (const auto& clause : f.solver.clauses()) {
        bool sat = false;
        for (auto l : clause)
            if (value[std::abs(l)] == (l > 0)) {
                sat = true;
                break;
            }
        if (!sat)
            return false;
    }
    return true;
}

} // namespace dps
