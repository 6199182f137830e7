#include "dps/explicit_semantics.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <optional>
#include <random>
#include <set>

namespace dps {

std::size_t ConfigurationHash::operator()(const Configuration& c) const noexcept
{
    std::size_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    };
    for (auto l : c.loc)
        mix(static_cast<std::uint64_t>(l));
    for (auto v : c.val)
        mix(v);
    return h;
}

Configuration initial_configuration(const System& s)
{
    Configuration c;
    for (const auto& comp : s.components) {
        c.loc.push_back(comp.initial_location);
        c.val.push_back(comp.initial_valuation);
    }
    return c;
}

namespace {

bool eval_guard(const Expr& g, std::uint64_t valuation)
{
    return g.eval([valuation](const Expr& a) { return ((valuation >> a.index) & 1U) != 0; });
}

bool component_ready(const Component& comp, LocationId loc, std::uint64_t val, InteractionId sigma)
{
    for (const auto& t : comp.transitions)
        if (t.label == sigma && t.from == loc && eval_guard(t.guard, val))
            return true;
    return false;
}

} // namespace

bool guard_enabled(const System& s, const Configuration& c, InteractionId sigma)
{
    for (auto i : s.participants[sigma])
        if (!component_ready(s.components[i], c.loc[i], c.val[i], sigma))
            return false;
    return true;
}

std::vector<InteractionId> globally_enabled(const System& s, const Configuration& c)
{
    const auto n = static_cast<InteractionId>(s.num_interactions());
    std::vector<bool> joint(n);
    for (InteractionId sigma = 0; sigma < n; ++sigma)
        joint[sigma] = guard_enabled(s, c, sigma);
    std::vector<bool> blocked(n, false);
    for (const auto& [low, high] : s.priorities)
        if (joint[high])
            blocked[low] = true;
    std::vector<InteractionId> out;
    for (InteractionId sigma = 0; sigma < n; ++sigma)
        if (joint[sigma] && !blocked[sigma])
            out.push_back(sigma);
    return out;
}

std::vector<Configuration> successors(const System& s, const Configuration& c, InteractionId sigma)
{
    // Per participant: every (target, post-valuation) reachable by one enabled σ-transition.
    std::vector<std::vector<std::pair<LocationId, std::uint64_t>>> local;
    std::vector<ComponentId> who;
    for (auto i : s.participants[sigma]) {
        const auto& comp = s.components[i];
        std::set<std::pair<LocationId, std::uint64_t>> moves;
        for (const auto& t : comp.transitions) {
            if (t.label != sigma || t.from != c.loc[i] || !eval_guard(t.guard, c.val[i]))
                continue;
            std::vector<std::uint64_t> vals{0};
            for (std::size_t v = 0; v < comp.variables.size(); ++v) {
                std::vector<std::uint64_t> next;
                for (auto base : vals) {
                    if (t.update[v] & kUpdateFalse)
                        next.push_back(base);
                    if (t.update[v] & kUpdateTrue)
                        next.push_back(base | (std::uint64_t{1} << v));
                }
                vals = std::move(next);
            }
            for (auto val : vals)
                moves.emplace(t.to, val);
        }
        if (moves.empty())
            return {};
        local.emplace_back(moves.begin(), moves.end());
        who.push_back(i);
    }

    std::vector<Configuration> out;
    std::vector<std::size_t> pick(local.size(), 0);
    while (true) {
        Configuration next = c;
        for (std::size_t k = 0; k < local.size(); ++k) {
            next.loc[who[k]] = local[k][pick[k]].first;
            next.val[who[k]] = local[k][pick[k]].second;
        }
        out.push_back(std::move(next));
        std::size_t k = 0;
        while (k < pick.size() && ++pick[k] == local[k].size()) {
            pick[k] = 0;
            ++k;
        }
        if (k == pick.size())
            break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool deadlocked(const System& s, const Configuration& c)
{
    return globally_enabled(s, c).empty();
}

bool is_risk(const RiskSpec& risk, const Configuration& c)
{
    return risk.predicate.eval([&c](const Expr& a) {
        if (a.is_location)
            return c.loc[a.component] == a.index;
        return ((c.val[a.component] >> a.index) & 1U) != 0;
    });
}

std::vector<InteractionId> distributively_enabled(const System& s, const CommArchitecture& com,
                                                  const Configuration& c)
{
    auto visible_by = [&](InteractionId x, ComponentId j) {
        for (auto i : s.participants[x])
            if (!com.has(i, j))
                return false;
        return true;
    };

    std::vector<InteractionId> out;
    const auto n = static_cast<InteractionId>(s.num_interactions());
    for (InteractionId sigma = 0; sigma < n; ++sigma) {
        bool ok = true;
        for (auto i : s.participants[sigma])
            if (visible_by(sigma, i) && !component_ready(s.components[i], c.loc[i], c.val[i], sigma)) {
                ok = false;
                break;
            }
        if (!ok)
            continue;
        for (const auto& [low, high] : s.priorities) {
            if (low != sigma)
                continue;
            bool seen_by_all = true;
            for (auto i : s.participants[sigma])
                if (!visible_by(high, i)) {
                    seen_by_all = false;
                    break;
                }
            if (seen_by_all && guard_enabled(s, c, high)) {
                ok = false;
                break;
            }
        }
        if (ok)
            out.push_back(sigma);
    }
    return out;
}

std::vector<int> ReachableSet::path_to(int i) const
{
    std::vector<int> path;
    for (int k = i; k >= 0; k = parent[k])
        path.push_back(k);
    std::reverse(path.begin(), path.end());
    return path;
}

namespace {

/// BFS; `stop` is consulted on every newly discovered state and ends the search early when it returns true.
template <class Stop>
int explore(const System& s, std::size_t cap, ReachableSet& r, Stop&& stop)
{
    auto c0 = initial_configuration(s);
    r.states.push_back(c0);
    r.parent.push_back(-1);
    r.via.push_back(-1);
    r.index.emplace(c0, 0);
    if (stop(c0))
        return 0;
    for (std::size_t head = 0; head < r.states.size(); ++head) {
        const Configuration cur = r.states[head];
        for (auto sigma : globally_enabled(s, cur)) {
            for (auto& next : successors(s, cur, sigma)) {
                ++r.edges;
                if (r.index.count(next))
                    continue;
                if (r.states.size() >= cap)
                    throw CapacityError("explicit state cap of " + std::to_string(cap) + " configurations exceeded");
                int id = static_cast<int>(r.states.size());
                r.index.emplace(next, id);
                r.states.push_back(next);
                r.parent.push_back(static_cast<int>(head));
                r.via.push_back(sigma);
                if (stop(r.states.back()))
                    return id;
            }
        }
    }
    return -1;
}

} // namespace

ReachableSet reachable(const System& s, std::size_t cap)
{
    ReachableSet r;
    explore(s, cap, r, [](const Configuration&) { return false; });
    return r;
}

SystemStats system_stats(const System& s, std::size_t cap)
{
    auto r = reachable(s, cap);
    return {r.states.size(), r.edges, s.num_interactions(), s.num_components()};
}

Verdict check_safe(const System& s, const RiskSpec& risk, std::size_t cap)
{
    System closed = s.with_priorities(transitive_closure(s.priorities));
    ReachableSet r;
    Verdict v;
    int bad = explore(closed, cap, r, [&](const Configuration& c) {
        if (is_risk(risk, c)) {
            v.kind = Verdict::Kind::Risk;
            return true;
        }
        if (deadlocked(closed, c)) {
            v.kind = Verdict::Kind::Deadlock;
            return true;
        }
        return false;
    });
    if (bad < 0) {
        v.kind = Verdict::Kind::Safe;
        return v;
    }
    auto path = r.path_to(bad);
    for (std::size_t k = 0; k < path.size(); ++k) {
        v.witness.push_back(r.states[path[k]]);
        if (k > 0)
            v.witness_labels.push_back(r.via[path[k]]);
    }
    return v;
}

SynthesisResult brute_force_synthesize(const System& s, const CommArchitecture& com, const RiskSpec& risk,
                                       std::size_t cap)
{
    const std::size_t n = s.num_interactions();
    if (n > 6)
        throw std::invalid_argument("brute_force_synthesize: alphabet larger than 6 interactions");

    SynthesisResult result;
    PrioritySet base = transitive_closure(s.priorities);
    if (!satisfy_irreflexivity(base) || !satisfy_arch_constraint(base, s, com)) {
        result.status = SynthesisResult::Status::Infeasible;
        result.evidence = "base priorities are not a valid deployable priority set";
        return result;
    }

    // Relations as bit rows: rel[a] has bit b when a < b.
    using Rows = std::vector<std::uint32_t>;
    auto close = [n](Rows rel) {
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                if (rel[i] >> k & 1U)
                    rel[i] |= rel[k];
        return rel;
    };
    Rows allowed(n, 0);
    std::vector<Priority> order;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b)
                continue;
            Priority p{static_cast<int>(a), static_cast<int>(b)};
            if (satisfy_arch_constraint({p}, s, com)) {
                allowed[a] |= 1U << b;
                order.push_back(p);
            }
        }
    Rows start(n, 0);
    for (const auto& [a, b] : base)
        start[a] |= 1U << b;

    std::optional<Rows> found;
    std::function<void(std::size_t, const Rows&, const Rows&)> dfs = [&](std::size_t k, const Rows& rel,
                                                                        const Rows& excluded) {
        if (found)
            return;
        if (k == order.size()) {
            PrioritySet p;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    if (rel[a] >> b & 1U)
                        p.emplace(static_cast<int>(a), static_cast<int>(b));
            if (check_safe(s.with_priorities(p), risk, cap).safe())
                found = rel;
            return;
        }
        auto [a, b] = order[k];
        if (rel[a] >> b & 1U) {
            dfs(k + 1, rel, excluded);
            return;
        }
        Rows ex = excluded;
        ex[a] |= 1U << b;
        dfs(k + 1, rel, ex);
        if (found)
            return;
        Rows with = rel;
        with[a] |= 1U << b;
        with = close(std::move(with));
        for (std::size_t i = 0; i < n; ++i) {
            if ((with[i] >> i & 1U) || (with[i] & excluded[i]) || (with[i] & ~(allowed[i] | start[i])))
                return;
        }
        dfs(k + 1, with, excluded);
    };
    dfs(0, start, Rows(n, 0));

    if (!found) {
        result.status = SynthesisResult::Status::Infeasible;
        result.evidence = "no transitive, irreflexive, deployable priority extension is safe";
        return result;
    }
    result.status = SynthesisResult::Status::Success;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (((*found)[a] >> b & 1U) && !s.priorities.count({static_cast<int>(a), static_cast<int>(b)}))
                result.priorities.emplace(static_cast<int>(a), static_cast<int>(b));
    return result;
}

Trace simulate_distributed(const System& s, const CommArchitecture& com, const RiskSpec& risk,
                           const SimulationOptions& opts)
{
    System closed = s.with_priorities(transitive_closure(s.priorities));
    std::mt19937_64 rng(opts.seed.value_or(0));
    Trace trace;
    Configuration cur = initial_configuration(closed);
    for (std::size_t step = 0;; ++step) {
        TraceStep ts;
        ts.config = cur;
        ts.enabled = distributively_enabled(closed, com, cur);
        if (is_risk(risk, cur)) {
            trace.steps.push_back(std::move(ts));
            trace.outcome = Trace::Outcome::Risk;
            return trace;
        }
        if (ts.enabled.empty()) {
            trace.steps.push_back(std::move(ts));
            trace.outcome = Trace::Outcome::Deadlock;
            return trace;
        }
        if (step >= opts.steps) {
            trace.steps.push_back(std::move(ts));
            return trace;
        }
        InteractionId sigma = ts.enabled.front();
        if (opts.seed)
            sigma = ts.enabled[std::uniform_int_distribution<std::size_t>(0, ts.enabled.size() - 1)(rng)];
        auto next = successors(closed, cur, sigma);
        std::size_t pick = 0;
        if (opts.seed)
            pick = std::uniform_int_distribution<std::size_t>(0, next.size() - 1)(rng);
        ts.chosen = sigma;
        trace.steps.push_back(std::move(ts));
        cur = next[pick];
    }
}

} // namespace dps
