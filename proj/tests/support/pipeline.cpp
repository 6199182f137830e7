#include "pipeline.hpp"

namespace dps::corpus {

Analysis analyze(const Model& m)
{
    Analysis a;
    a.model = m;
    a.closed = m.system.with_priorities(transitive_closure(m.system.priorities));
    a.vis = visibility_matrix(a.closed, m.architecture);
    a.ctx = allocate_context(a.closed);
    a.full = build_arena(a.ctx, a.closed, a.vis, m.risk);
    a.reach = symbolic_reachable(a.ctx, a.full);
    a.arena = prune_to_reachable(a.full, a.reach);
    a.esc = build_escape_predicate(a.ctx);
    a.nested = nested_risk_attractor(a.ctx, a.arena, a.esc);
    return a;
}

bool enters_from_sources(const GameContext& ctx, const bdd::Bdd& ctrl, const bdd::Bdd& t_f,
                         const bdd::Bdd& nest_attr)
{
    auto& m = *ctx.mgr;
    bdd::Bdd sources = ctx.var(ctx.p0) & project_configs(ctx, m.exists(t_f, ctx.primed_cube));
    bdd::Bdd target = m.rename(nest_attr, ctx.to_primed);
    return !(ctrl & sources & target).is_false();
}

} // namespace dps::corpus
