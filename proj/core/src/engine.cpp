#include "dps/engine.hpp"

#include "dps/attractor.hpp"
#include "dps/fixer.hpp"
#include "dps/game.hpp"
#include "dps/refine.hpp"

#include <chrono>
#include <sstream>

namespace dps {

using bdd::Bdd;
using Clock = std::chrono::steady_clock;

PrioritySet Assignment::true_set() const
{
    PrioritySet out;
    for (const auto& [p, v] : values)
        if (v)
            out.insert(p);
    return out;
}

std::optional<Priority> choose_free_variable(const VisibilityMatrix& vis, const Assignment& asgn,
                                             const std::vector<Priority>& guidance)
{
    for (const auto& p : guidance)
        if (p.first != p.second && vis.visible(p.second, p.first) && !asgn.assigned(p))
            return p;
    const auto n = static_cast<InteractionId>(vis.size());
    for (InteractionId lo = 0; lo < n; ++lo)
        for (InteractionId hi = 0; hi < n; ++hi)
            if (lo != hi && vis.visible(hi, lo) && !asgn.assigned({lo, hi}))
                return Priority{lo, hi};
    return std::nullopt;
}

namespace {

struct BudgetExceeded {};

bool supported(const PrioritySet& p, const VisibilityMatrix& vis)
{
    return std::all_of(p.begin(), p.end(), [&](const Priority& q) { return vis.visible(q.second, q.first); });
}

struct NodeAnalysis {
    bool safe = false;
    bool init_in_nest = false;
    /// Closed priority set reached by diagnosis-based fixing.
    std::optional<PrioritySet> solution;
    std::vector<Priority> guidance;
};

/// One run of the search over a fixed alphabet.
class Search {
public:
    Search(const Model& m, const SynthesisOptions& opts, std::optional<Clock::time_point> deadline,
           SynthesisStats& stats)
        : model_(m),
          opts_(opts),
          deadline_(deadline),
          stats_(stats),
          vis_(visibility_matrix(m.system, m.architecture)),
          ctx_(allocate_context(m.system, opts.bdd_nodes)),
          en_(build_enabledness(ctx_, m.system)),
          env_(build_env(ctx_, m.system)),
          states_(encode_states(ctx_, m.system, m.risk)),
          esc_(build_escape_predicate(ctx_))
    {
    }

    SynthesisResult run()
    {
        SynthesisResult r;
        base_ = transitive_closure(model_.system.priorities);
        if (!satisfy_irreflexivity(base_) || !supported(base_, vis_)) {
            r.status = SynthesisResult::Status::Infeasible;
            r.evidence = "the system's own priorities are cyclic or not supported by the architecture";
            return r;
        }
        try {
            Assignment root;
            if (dps(root, {})) {
                r.status = SynthesisResult::Status::Success;
                for (const auto& p : *solution_)
                    if (!base_.count(p))
                        r.priorities.insert(p);
                return r;
            }
        } catch (const BudgetExceeded&) {
            r.status = SynthesisResult::Status::Exhausted;
            std::ostringstream os;
            os << "time budget of " << opts_.budget_seconds << " s exhausted after " << stats_.nodes
               << " search nodes";
            r.evidence = os.str();
            return r;
        }
        r.status = SynthesisResult::Status::Infeasible;
        if (base_infeasible_)
            r.evidence = "the initial configuration lies in the nested risk attractor of the system without new "
                         "priorities";
        else
            r.evidence = "every priority assignment supported by the architecture leads to a conflict";
        return r;
    }

    [[nodiscard]] bool base_infeasible() const { return base_infeasible_; }
    [[nodiscard]] const std::set<InteractionId>& refinement_candidates() const { return refinement_candidates_; }

private:
    void check_deadline() const
    {
        if (deadline_ && Clock::now() > *deadline_)
            throw BudgetExceeded{};
    }

    GameArena arena_for(const PrioritySet& p)
    {
        GameArena a;
        a.mgr = ctx_.mgr;
        a.ctrl = build_control(ctx_, model_.system.with_priorities(p), vis_, en_);
        a.env = env_;
        a.dead = en_.dead;
        a.risk = states_.risk;
        a.initial = states_.initial;
        a.enabled = en_.p;
        return a;
    }

    struct Probe {
        GameArena arena; // pruned to reachable states
        bool safe = false;
    };

    Probe probe(const PrioritySet& p)
    {
        Probe pr;
        GameArena full = arena_for(p);
        Bdd reach = symbolic_reachable(ctx_, full);
        pr.safe = (reach & full.bad()).is_false();
        if (!pr.safe)
            pr.arena = prune_to_reachable(full, reach);
        return pr;
    }

    NestedAttractorResult nested(const GameArena& arena, const std::optional<Bdd>& seed = std::nullopt)
    {
        auto r = nested_risk_attractor(ctx_, arena, esc_, seed);
        stats_.outer_iters += r.outer_iters;
        stats_.inner_iters += r.inner_iters;
        return r;
    }

    /// Resolves one 𝒯_f; returns the closed priority set it proposes.
    std::optional<PrioritySet> try_fix(const Bdd& t_f, const PrioritySet& p, const PrioritySet& forbidden,
                                       NodeAnalysis& a)
    {
        auto cubes = extract_candidates(ctx_, t_f);
        if (cubes.empty())
            return std::nullopt;
        auto formula = compile_clauses(std::move(cubes), p, vis_, forbidden);
        auto out = resolve_fix(formula, vis_, {.min_cardinality = opts_.guidance == Guidance::Rp1});
        stats_.sat_calls += out.sat_calls;
        if (!out.fixed()) {
            if (a.guidance.empty())
                a.guidance = out.guidance;
            refinement_candidates_.insert(out.refinement_candidates.begin(), out.refinement_candidates.end());
            return std::nullopt;
        }
        ++stats_.fixes_tried;
        PrioritySet next = p;
        next.insert(out.priorities.begin(), out.priorities.end());
        return transitive_closure(next);
    }

    /// Applies fixes until the system is safe or no further fix is found.
    void fix_loop(PrioritySet p, const PrioritySet& forbidden, Probe pr, NestedAttractorResult nr,
                  NodeAnalysis& a)
    {
        while (true) {
            check_deadline();
            auto next = try_fix(nr.t_f, p, forbidden, a);
            if (!next && opts_.overapprox) {
                auto wide = nested(pr.arena, overapproximate(ctx_, nr.nest_attr, nr.t_f));
                if (!infeasible_at_base(pr.arena.initial, wide.nest_attr))
                    next = try_fix(wide.t_f, p, forbidden, a);
            }
            if (!next || *next == p)
                return;
            p = std::move(*next);
            pr = probe(p);
            if (pr.safe) {
                a.solution = p;
                return;
            }
            nr = nested(pr.arena);
            if (infeasible_at_base(pr.arena.initial, nr.nest_attr))
                return;
        }
    }

    const NodeAnalysis& analyze(const PrioritySet& p, const PrioritySet& forbidden)
    {
        auto it = memo_.find(p);
        if (it != memo_.end())
            return it->second;
        NodeAnalysis a;
        Probe pr = probe(p);
        if (pr.safe) {
            a.safe = true;
        } else {
            auto nr = nested(pr.arena);
            if (infeasible_at_base(pr.arena.initial, nr.nest_attr))
                a.init_in_nest = true;
            else if (opts_.fixing)
                fix_loop(p, forbidden, pr, nr, a);
        }
        return memo_.emplace(p, std::move(a)).first->second;
    }

    bool dps(Assignment asgn, const std::vector<Priority>& inherited)
    {
        check_deadline();
        ++stats_.nodes;

        PrioritySet p = base_;
        for (const auto& q : asgn.true_set())
            p.insert(q);
        p = transitive_closure(p);
        for (const auto& q : p) {
            auto v = asgn.values.find(q);
            if (v != asgn.values.end() && !v->second)
                return false;
            asgn.values[q] = true;
        }
        if (!satisfy_irreflexivity(p) || !supported(p, vis_))
            return false;

        PrioritySet forbidden;
        for (const auto& [q, v] : asgn.values)
            if (!v)
                forbidden.insert(q);
        const NodeAnalysis& a = analyze(p, forbidden);
        if (a.safe) {
            solution_ = p;
            return true;
        }
        if (a.init_in_nest) {
            if (asgn.level == 0)
                base_infeasible_ = true;
            return false;
        }
        if (a.solution) {
            solution_ = a.solution;
            return true;
        }

        const std::vector<Priority> guidance = a.guidance.empty() ? inherited : a.guidance;
        static const std::vector<Priority> none;
        auto var = choose_free_variable(vis_, asgn, opts_.guidance == Guidance::Rp2 ? guidance : none);
        if (!var)
            return false;

        Assignment with = asgn;
        with.values[*var] = true;
        with.level = asgn.level + 1;
        if (dps(std::move(with), guidance))
            return true;
        Assignment without = std::move(asgn);
        without.values[*var] = false;
        ++without.level;
        return dps(std::move(without), guidance);
    }

    const Model& model_;
    SynthesisOptions opts_;
    std::optional<Clock::time_point> deadline_;
    SynthesisStats& stats_;
    VisibilityMatrix vis_;
    GameContext ctx_;
    Enabledness en_;
    Bdd env_;
    EncodedStates states_;
    Bdd esc_;
    PrioritySet base_;
    std::map<PrioritySet, NodeAnalysis> memo_;
    std::optional<PrioritySet> solution_;
    bool base_infeasible_ = false;
    std::set<InteractionId> refinement_candidates_;
};

} // namespace

SynthesisResult synthesize(const Model& m, const SynthesisOptions& opts)
{
    const auto start = Clock::now();
    std::optional<Clock::time_point> deadline;
    if (opts.budget_seconds > 0)
        deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(opts.budget_seconds));

    SynthesisStats stats;
    Model current = m;
    bool refined = false;
    if (opts.refine == Refinement::Eager) {
        auto r = refine_alphabet(m);
        stats.refinements += r.split.size();
        refined = !r.split.empty();
        current = std::move(r.model);
    }

    SynthesisResult result;
    while (true) {
        std::set<InteractionId> candidates;
        bool base_infeasible = false;
        try {
            Search search(current, opts, deadline, stats);
            result = search.run();
            candidates = search.refinement_candidates();
            base_infeasible = search.base_infeasible();
        } catch (const bdd::NodeCapacityError&) {
            result = {};
            result.status = SynthesisResult::Status::Exhausted;
            result.evidence = "BDD node capacity of " + std::to_string(opts.bdd_nodes) + " nodes exhausted after " +
                              std::to_string(stats.nodes) + " search nodes";
        }
        if (result.success() || opts.refine != Refinement::Lazy || base_infeasible ||
            result.status == SynthesisResult::Status::Exhausted)
            break;
        std::set<InteractionId> pick;
        auto refinable = refinable_interactions(current.system);
        for (auto sigma : candidates)
            if (refinable.count(sigma))
                pick.insert(sigma);
        if (pick.empty())
            break;
        auto r = refine_alphabet(current, pick);
        stats.refinements += r.split.size();
        refined = true;
        current = std::move(r.model);
    }

    result.stats = stats;
    result.stats.time_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count());
    if (refined)
        result.refined = std::move(current);
    return result;
}

bool symbolic_safe(const System& s, const CommArchitecture& com, const RiskSpec& risk)
{
    System closed = s.with_priorities(transitive_closure(s.priorities));
    auto ctx = allocate_context(closed);
    auto arena = build_arena(ctx, closed, visibility_matrix(closed, com), risk);
    return (symbolic_reachable(ctx, arena) & arena.bad()).is_false();
}

ValidationReport validate_result(const Model& m, const PrioritySet& added, std::size_t cap)
{
    ValidationReport v;
    PrioritySet all = m.system.priorities;
    all.insert(added.begin(), added.end());
    all = transitive_closure(all);
    const System s = m.system.with_priorities(all);

    v.closed_irreflexive = satisfy_irreflexivity(all);
    if (!v.closed_irreflexive)
        v.failures.push_back("priorities are cyclic");
    v.deployable = satisfy_arch_constraint(all, s, m.architecture);
    if (!v.deployable)
        v.failures.push_back("a priority is not supported by the communication architecture");
    if (!v.closed_irreflexive)
        return v;

    try {
        auto verdict = check_safe(s, m.risk, cap);
        v.explicit_check = true;
        v.safe = verdict.safe();
    } catch (const CapacityError&) {
        v.safe = symbolic_safe(s, m.architecture, m.risk);
    }
    if (!v.safe)
        v.failures.push_back("a deadlock or risk configuration is reachable");

    if (v.deployable && v.safe) {
        auto trace = simulate_distributed(s, m.architecture, m.risk, {.steps = 200, .seed = std::nullopt});
        v.simulation_ok = trace.outcome == Trace::Outcome::Completed;
        if (!v.simulation_ok)
            v.failures.push_back("distributed simulation reached a deadlock or risk configuration");
    }
    return v;
}

} // namespace dps
