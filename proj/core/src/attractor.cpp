#include "dps/attractor.hpp"

namespace dps {

using bdd::Bdd;

Bdd build_escape_predicate(const GameContext& ctx)
{
    Bdd esc = ctx.mgr->mk_false();
    const auto n = static_cast<InteractionId>(ctx.num_interactions);
    for (InteractionId i = 0; i < n; ++i) {
        Bdd e = ctx.enc(i, true) & ctx.var(ctx.vis[i], true);
        for (InteractionId j = 0; j < n; ++j)
            if (j != i)
                e &= ~ctx.var(ctx.vis[j], true);
        esc |= e;
    }
    return esc;
}

GameArena prune_to_reachable(const GameArena& arena, const Bdd& reach)
{
    GameArena a = arena;
    a.ctrl = arena.ctrl & reach;
    a.env = arena.env & reach;
    a.dead = arena.dead & reach;
    a.risk = arena.risk & reach;
    return a;
}

namespace {

/// ∃Ξ′: rel ∧ SUBS(X, Ξ, Ξ′)
Bdd pre_image(const GameContext& ctx, const Bdd& rel, const Bdd& x)
{
    return ctx.mgr->and_exists(rel, ctx.mgr->rename(x, ctx.to_primed), ctx.primed_cube);
}

Bdd boundary(const GameContext& ctx, const Bdd& ctrl, const Bdd& x)
{
    Bdd point_to = ctrl & ctx.mgr->rename(x, ctx.to_primed);
    Bdd outside = ~x & ctx.mgr->exists(ctrl, ctx.primed_cube);
    return point_to & outside;
}

} // namespace

Bdd risk_attractor(const GameContext& ctx, const GameArena& arena, const Bdd& target, std::size_t* iterations)
{
    Bdd attr = target;
    while (true) {
        if (iterations)
            ++*iterations;
        Bdd env_add = pre_image(ctx, arena.env, attr);
        Bdd point_to = pre_image(ctx, arena.ctrl, attr);
        Bdd escape = pre_image(ctx, arena.ctrl, ~attr);
        Bdd next = attr | env_add | ctx.mgr->apply_diff(point_to, escape);
        if (next == attr)
            return attr;
        attr = next;
    }
}

Bdd risk_attractor(const GameContext& ctx, const GameArena& arena)
{
    return risk_attractor(ctx, arena, arena.bad());
}

NestedAttractorResult nested_risk_attractor(const GameContext& ctx, const GameArena& arena, const Bdd& esc,
                                            const std::optional<Bdd>& seed)
{
    NestedAttractorResult r;
    Bdd nested = seed ? *seed : arena.bad();
    while (true) {
        ++r.outer_iters;
        Bdd attr = risk_attractor(ctx, arena, nested, &r.inner_iters);
        Bdd t = boundary(ctx, arena.ctrl, attr);
        Bdd new_bad = ctx.mgr->and_exists(t, esc, ctx.primed_cube);
        Bdd next = attr | new_bad;
        if (next == nested)
            break;
        nested = next;
    }
    r.t_f = boundary(ctx, arena.ctrl, nested);
    r.nest_attr = nested;
    return r;
}

bool infeasible_at_base(const Bdd& initial, const Bdd& nest_attr)
{
    return !(initial & nest_attr).is_false();
}

Bdd overapproximate(const GameContext& ctx, const Bdd& nest_attr, const Bdd& t_f)
{
    return nest_attr | ctx.mgr->exists(t_f, ctx.primed_cube);
}

} // namespace dps
