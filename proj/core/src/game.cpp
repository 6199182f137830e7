#include "dps/game.hpp"

#include <algorithm>
#include <set>

namespace dps {

using bdd::Bdd;
using bdd::Var;

namespace {

std::size_t bits_for(std::size_t n)
{
    std::size_t b = 0;
    while ((std::size_t{1} << b) < n)
        ++b;
    return b;
}

Bdd encode_number(const GameContext& ctx, const std::vector<Var>& bits, std::size_t value, bool primed_copy)
{
    Bdd r = ctx.mgr->mk_true();
    for (std::size_t k = 0; k < bits.size(); ++k) {
        Var v = primed_copy ? GameContext::prime(bits[k]) : bits[k];
        r &= ((value >> k) & 1U) ? ctx.mgr->mk_var(v) : ctx.mgr->mk_nvar(v);
    }
    return r;
}

Bdd encode_guard(const GameContext& ctx, ComponentId i, const Expr& e)
{
    switch (e.kind) {
    case Expr::Kind::Const:
        return e.value ? ctx.mgr->mk_true() : ctx.mgr->mk_false();
    case Expr::Kind::Atom:
        return ctx.data(i, e.index);
    case Expr::Kind::Not:
        return ~encode_guard(ctx, i, e.kids[0]);
    case Expr::Kind::And: {
        Bdd r = ctx.mgr->mk_true();
        for (const auto& k : e.kids)
            r &= encode_guard(ctx, i, k);
        return r;
    }
    case Expr::Kind::Or: {
        Bdd r = ctx.mgr->mk_false();
        for (const auto& k : e.kids)
            r |= encode_guard(ctx, i, k);
        return r;
    }
    }
    return ctx.mgr->mk_false();
}

Bdd encode_risk(const GameContext& ctx, const Expr& e)
{
    switch (e.kind) {
    case Expr::Kind::Const:
        return e.value ? ctx.mgr->mk_true() : ctx.mgr->mk_false();
    case Expr::Kind::Atom:
        return e.is_location ? ctx.at(e.component, e.index) : ctx.data(e.component, e.index);
    case Expr::Kind::Not:
        return ~encode_risk(ctx, e.kids[0]);
    case Expr::Kind::And: {
        Bdd r = ctx.mgr->mk_true();
        for (const auto& k : e.kids)
            r &= encode_risk(ctx, k);
        return r;
    }
    case Expr::Kind::Or: {
        Bdd r = ctx.mgr->mk_false();
        for (const auto& k : e.kids)
            r |= encode_risk(ctx, k);
        return r;
    }
    }
    return ctx.mgr->mk_false();
}

Bdd iff_primed(const GameContext& ctx, Var v)
{
    return ctx.mgr->apply_iff(ctx.mgr->mk_var(v), ctx.mgr->mk_var(GameContext::prime(v)));
}

} // namespace

Bdd GameContext::var(Var v, bool primed_copy) const
{
    return mgr->mk_var(primed_copy ? prime(v) : v);
}

Bdd GameContext::enc(InteractionId sigma, bool primed_copy) const
{
    return encode_number(*this, code, static_cast<std::size_t>(sigma), primed_copy);
}

Bdd GameContext::valid_code(bool primed_copy) const
{
    Bdd r = mgr->mk_false();
    for (std::size_t k = 0; k < num_interactions; ++k)
        r |= enc(static_cast<InteractionId>(k), primed_copy);
    return r;
}

Bdd GameContext::at(ComponentId i, LocationId l, bool primed_copy) const
{
    return encode_number(*this, loc_bits[i], static_cast<std::size_t>(l), primed_copy);
}

Bdd GameContext::data(ComponentId i, int v, bool primed_copy) const
{
    return var(data_bits[i][v], primed_copy);
}

Bdd GameContext::stutter(ComponentId i) const
{
    Bdd r = mgr->mk_true();
    for (auto v : loc_bits[i])
        r &= iff_primed(*this, v);
    for (auto v : data_bits[i])
        r &= iff_primed(*this, v);
    return r;
}

namespace {

/// Breadth-first order over the "share an interaction" graph, so that components that
/// synchronize get neighbouring BDD variables.
std::vector<std::size_t> component_order(const System& s)
{
    const std::size_t n = s.num_components();
    std::vector<std::set<std::size_t>> adj(n);
    for (const auto& parts : s.participants)
        for (auto a : parts)
            for (auto b : parts)
                if (a != b)
                    adj[static_cast<std::size_t>(a)].insert(static_cast<std::size_t>(b));
    std::vector<std::size_t> order;
    std::vector<bool> seen(n, false);
    for (std::size_t root = 0; root < n; ++root) {
        if (seen[root])
            continue;
        seen[root] = true;
        std::size_t head = order.size();
        order.push_back(root);
        while (head < order.size()) {
            for (auto j : adj[order[head++]])
                if (!seen[j]) {
                    seen[j] = true;
                    order.push_back(j);
                }
        }
    }
    return order;
}

} // namespace

GameContext allocate_context(const System& s, std::size_t node_capacity)
{
    GameContext ctx;
    ctx.num_interactions = s.num_interactions();
    Var next = 0;
    auto take = [&next]() {
        Var v = next;
        next += 2;
        return v;
    };
    ctx.p0 = take();
    for (std::size_t k = 0; k < bits_for(ctx.num_interactions); ++k)
        ctx.code.push_back(take());
    for (std::size_t k = 0; k < ctx.num_interactions; ++k)
        ctx.vis.push_back(take());
    const std::size_t n = s.num_components();
    ctx.num_locations.resize(n);
    ctx.loc_bits.resize(n);
    ctx.data_bits.resize(n);
    for (auto i : component_order(s)) {
        const auto& comp = s.components[i];
        ctx.num_locations[i] = comp.locations.size();
        for (std::size_t k = 0; k < bits_for(comp.locations.size()); ++k)
            ctx.loc_bits[i].push_back(take());
        for (std::size_t k = 0; k < comp.variables.size(); ++k)
            ctx.data_bits[i].push_back(take());
    }
    ctx.mgr = std::make_shared<bdd::Manager>(next, node_capacity);
    for (Var v = 0; v < next; v += 2) {
        ctx.unprimed.push_back(v);
        ctx.primed.push_back(v + 1);
    }
    for (std::size_t i = 0; i < s.num_components(); ++i) {
        ctx.config_vars.insert(ctx.config_vars.end(), ctx.loc_bits[i].begin(), ctx.loc_bits[i].end());
        ctx.config_vars.insert(ctx.config_vars.end(), ctx.data_bits[i].begin(), ctx.data_bits[i].end());
    }
    std::vector<Var> control{ctx.p0};
    control.insert(control.end(), ctx.code.begin(), ctx.code.end());
    control.insert(control.end(), ctx.vis.begin(), ctx.vis.end());
    ctx.unprimed_cube = ctx.mgr->mk_cube(ctx.unprimed);
    ctx.primed_cube = ctx.mgr->mk_cube(ctx.primed);
    ctx.control_cube = ctx.mgr->mk_cube(control);
    ctx.to_primed = ctx.mgr->make_renaming(ctx.unprimed, ctx.primed);
    ctx.to_unprimed = ctx.mgr->make_renaming(ctx.primed, ctx.unprimed);
    return ctx;
}

Enabledness build_enabledness(const GameContext& ctx, const System& s)
{
    Enabledness en;
    en.dead = ctx.mgr->mk_true();
    for (std::size_t sigma = 0; sigma < s.num_interactions(); ++sigma) {
        Bdd p = ctx.mgr->mk_true();
        for (auto i : s.participants[sigma]) {
            Bdd ready = ctx.mgr->mk_false();
            for (const auto& t : s.components[i].transitions)
                if (t.label == static_cast<InteractionId>(sigma))
                    ready |= ctx.at(i, t.from) & encode_guard(ctx, i, t.guard);
            p &= ready;
        }
        en.dead &= ~p;
        en.p.push_back(std::move(p));
    }
    return en;
}

Bdd build_control(const GameContext& ctx, const System& s, const VisibilityMatrix& vis, const Enabledness& en)
{
    auto& m = *ctx.mgr;
    const auto n = static_cast<InteractionId>(s.num_interactions());
    Bdd frame = ctx.var(ctx.p0) & ~ctx.var(ctx.p0, true) & ctx.valid_code(true);
    for (std::size_t i = 0; i < s.num_components(); ++i)
        frame &= ctx.stutter(static_cast<ComponentId>(i));

    Bdd ctrl = m.mk_false();
    for (InteractionId s1 = 0; s1 < n; ++s1) {
        Bdd t = en.p[s1] & ctx.enc(s1, true) & ctx.var(ctx.vis[s1], true);
        for (InteractionId s2 = 0; s2 < n; ++s2) {
            if (s2 == s1)
                continue;
            Bdd bit = ctx.var(ctx.vis[s2], true);
            t &= vis.visible(s2, s1) ? m.apply_iff(en.p[s2], bit) : ~bit;
        }
        ctrl |= t;
    }
    ctrl &= frame;

    // σ1 ≺ σ2: σ1 is neither chosen nor shown as enabled while σ2's guard holds. Guard enabledness
    // stands in for σ2′ so the rewrite also applies when σ2 itself is hidden from the chooser.
    for (const auto& [low, high] : s.priorities) {
        Bdd both = en.p[low] & en.p[high];
        ctrl = m.apply_diff(ctrl, both & ctx.enc(low, true));
        Bdd low_bit = ctx.var(ctx.vis[low], true);
        Bdd t12 = ctrl & both & low_bit;
        if (t12.is_false())
            continue;
        ctrl = m.apply_diff(ctrl, t12);
        Bdd low_cube = m.mk_cube(std::vector<Var>{GameContext::prime(ctx.vis[low])});
        ctrl |= m.exists(t12, low_cube) & ~low_bit;
    }
    return ctrl;
}

Bdd build_env(const GameContext& ctx, const System& s)
{
    auto& m = *ctx.mgr;
    const auto n = static_cast<InteractionId>(s.num_interactions());
    Bdd turn = ~ctx.var(ctx.p0) & ctx.var(ctx.p0, true);
    Bdd env = m.mk_false();
    for (InteractionId sigma = 0; sigma < n; ++sigma) {
        Bdd t = turn & ctx.enc(sigma) & ctx.enc(sigma, true);
        for (InteractionId other = 0; other < n; ++other)
            if (other != sigma)
                t &= ~ctx.var(ctx.vis[other], true);
        const auto& who = s.participants[sigma];
        for (std::size_t i = 0; i < s.num_components(); ++i) {
            const auto id = static_cast<ComponentId>(i);
            if (!std::binary_search(who.begin(), who.end(), id)) {
                t &= ctx.stutter(id);
                continue;
            }
            const auto& comp = s.components[i];
            Bdd moves = m.mk_false();
            for (const auto& tr : comp.transitions) {
                if (tr.label != sigma)
                    continue;
                Bdd mv = ctx.at(id, tr.from) & encode_guard(ctx, id, tr.guard) & ctx.at(id, tr.to, true);
                for (std::size_t v = 0; v < comp.variables.size(); ++v) {
                    if (tr.update[v] == kUpdateTrue)
                        mv &= ctx.data(id, static_cast<int>(v), true);
                    else if (tr.update[v] == kUpdateFalse)
                        mv &= ~ctx.data(id, static_cast<int>(v), true);
                }
                moves |= mv;
            }
            t &= moves;
        }
        env |= t;
    }
    return env;
}

EncodedStates encode_states(const GameContext& ctx, const System& s, const RiskSpec& risk)
{
    EncodedStates out;
    out.initial = ctx.var(ctx.p0) & encode_configuration(ctx, initial_configuration(s));
    out.risk = encode_risk(ctx, risk.predicate);
    return out;
}

GameArena build_arena(const GameContext& ctx, const System& s, const VisibilityMatrix& vis, const RiskSpec& risk,
                      const Enabledness& en)
{
    GameArena a;
    a.mgr = ctx.mgr;
    a.ctrl = build_control(ctx, s, vis, en);
    a.env = build_env(ctx, s);
    a.dead = en.dead;
    auto states = encode_states(ctx, s, risk);
    a.risk = states.risk;
    a.initial = states.initial;
    a.enabled = en.p;
    return a;
}

GameArena build_arena(const GameContext& ctx, const System& s, const VisibilityMatrix& vis, const RiskSpec& risk)
{
    return build_arena(ctx, s, vis, risk, build_enabledness(ctx, s));
}

Bdd post_image(const GameContext& ctx, const Bdd& from, const Bdd& rel)
{
    Bdd next = ctx.mgr->and_exists(from, rel, ctx.unprimed_cube);
    return ctx.mgr->rename(next, ctx.to_unprimed);
}

Bdd symbolic_reachable(const GameContext& ctx, const GameArena& arena)
{
    Bdd reach = arena.initial;
    Bdd frontier = reach;
    while (!frontier.is_false()) {
        Bdd img = post_image(ctx, frontier, arena.ctrl) | post_image(ctx, frontier, arena.env);
        frontier = ctx.mgr->apply_diff(img, reach);
        reach |= frontier;
    }
    return reach;
}

Bdd encode_configuration(const GameContext& ctx, const Configuration& c, bool primed_copy)
{
    Bdd r = ctx.mgr->mk_true();
    for (std::size_t i = 0; i < c.loc.size(); ++i) {
        const auto id = static_cast<ComponentId>(i);
        r &= ctx.at(id, c.loc[i], primed_copy);
        for (std::size_t v = 0; v < ctx.data_bits[i].size(); ++v) {
            Bdd bit = ctx.data(id, static_cast<int>(v), primed_copy);
            r &= ((c.val[i] >> v) & 1U) ? bit : ~bit;
        }
    }
    return r;
}

Bdd project_configs(const GameContext& ctx, const Bdd& pred, std::optional<bool> control_turn)
{
    Bdd p = pred;
    if (control_turn)
        p &= *control_turn ? ctx.var(ctx.p0) : ~ctx.var(ctx.p0);
    return ctx.mgr->exists(p, ctx.control_cube);
}

std::vector<Configuration> decode_configurations(const GameContext& ctx, const Bdd& configs)
{
    std::vector<Configuration> out;
    const std::size_t m = ctx.loc_bits.size();
    std::vector<int> slot(ctx.mgr->num_vars(), -1);
    for (std::size_t k = 0; k < ctx.config_vars.size(); ++k)
        slot[ctx.config_vars[k]] = static_cast<int>(k);
    ctx.mgr->for_each_cube(configs, [&](const bdd::Cube& cube) {
        // Expand don't-care bits among the configuration variables.
        std::vector<int> value(ctx.config_vars.size(), -1);
        for (const auto& [v, pos] : cube)
            if (slot[v] >= 0)
                value[static_cast<std::size_t>(slot[v])] = pos ? 1 : 0;
        std::vector<std::size_t> free;
        for (std::size_t k = 0; k < value.size(); ++k)
            if (value[k] < 0)
                free.push_back(k);
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << free.size()); ++bits) {
            for (std::size_t k = 0; k < free.size(); ++k)
                value[free[k]] = static_cast<int>((bits >> k) & 1U);
            Configuration c;
            std::size_t pos = 0;
            bool ok = true;
            for (std::size_t i = 0; i < m; ++i) {
                std::size_t loc = 0;
                for (std::size_t k = 0; k < ctx.loc_bits[i].size(); ++k)
                    loc |= static_cast<std::size_t>(value[pos++]) << k;
                std::uint64_t val = 0;
                for (std::size_t k = 0; k < ctx.data_bits[i].size(); ++k)
                    val |= static_cast<std::uint64_t>(value[pos++]) << k;
                ok = ok && loc < ctx.num_locations[i];
                c.loc.push_back(static_cast<LocationId>(loc));
                c.val.push_back(val);
            }
            if (ok)
                out.push_back(std::move(c));
            for (std::size_t k = 0; k < free.size(); ++k)
                value[free[k]] = -1;
        }
        return true;
    });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace dps
