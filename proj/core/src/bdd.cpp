#include "dps/bdd.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

namespace dps::bdd {

namespace {

constexpr std::uint32_t kNil = 0xffffffffU;
constexpr Var kDeadVar = 0xfffffffeU;
constexpr std::size_t kCacheSize = std::size_t{1} << 20;

inline std::size_t hash3(std::uint32_t a, std::uint32_t b, std::uint32_t c)
{
    std::uint64_t h = a * 0x9e3779b97f4a7c15ULL;
    h ^= (b + 0x632be59bd9b4e019ULL) * 0xbf58476d1ce4e5b9ULL;
    h ^= (c + 0x85ebca6b) * 0x94d049bb133111ebULL;
    return static_cast<std::size_t>(h ^ (h >> 31));
}

} // namespace

// ---------------------------------------------------------------- handles

Bdd::Bdd(Manager* mgr, NodeId id) : mgr_(mgr), id_(id)
{
    mgr_->inc(id_);
}

Bdd::Bdd(const Bdd& other) : mgr_(other.mgr_), id_(other.id_)
{
    if (mgr_)
        mgr_->inc(id_);
}

Bdd::Bdd(Bdd&& other) noexcept : mgr_(other.mgr_), id_(other.id_)
{
    other.mgr_ = nullptr;
    other.id_ = 0;
}

Bdd& Bdd::operator=(const Bdd& other)
{
    if (this != &other) {
        if (other.mgr_)
            other.mgr_->inc(other.id_);
        if (mgr_)
            mgr_->dec(id_);
        mgr_ = other.mgr_;
        id_ = other.id_;
    }
    return *this;
}

Bdd& Bdd::operator=(Bdd&& other) noexcept
{
    if (this != &other) {
        if (mgr_)
            mgr_->dec(id_);
        mgr_ = other.mgr_;
        id_ = other.id_;
        other.mgr_ = nullptr;
        other.id_ = 0;
    }
    return *this;
}

Bdd::~Bdd()
{
    if (mgr_)
        mgr_->dec(id_);
}

Bdd Bdd::operator&(const Bdd& o) const { return mgr_->apply_and(*this, o); }
Bdd Bdd::operator|(const Bdd& o) const { return mgr_->apply_or(*this, o); }
Bdd Bdd::operator^(const Bdd& o) const { return mgr_->apply_xor(*this, o); }
Bdd Bdd::operator!() const { return mgr_->apply_not(*this); }

// ---------------------------------------------------------------- manager core

Manager::Manager(std::uint32_t num_vars, std::size_t node_capacity)
    : num_vars_(num_vars), capacity_(node_capacity), cache_(kCacheSize)
{
    nodes_.reserve(1024);
    nodes_.push_back({num_vars_, 0, 0, kNil, 0}); // false
    nodes_.push_back({num_vars_, 1, 1, kNil, 0}); // true
    buckets_.assign(1 << 12, kNil);
}

void Manager::grow_buckets()
{
    buckets_.assign(buckets_.size() * 2, kNil);
    const std::size_t mask = buckets_.size() - 1;
    for (NodeId id = 2; id < nodes_.size(); ++id) {
        auto& n = nodes_[id];
        if (n.var == kDeadVar)
            continue;
        auto b = hash3(n.var, n.lo, n.hi) & mask;
        n.next = buckets_[b];
        buckets_[b] = id;
    }
}

NodeId Manager::mk(Var v, NodeId lo, NodeId hi)
{
    if (lo == hi)
        return lo;
    const std::size_t mask = buckets_.size() - 1;
    auto b = hash3(v, lo, hi) & mask;
    for (NodeId id = buckets_[b]; id != kNil; id = nodes_[id].next) {
        const auto& n = nodes_[id];
        if (n.var == v && n.lo == lo && n.hi == hi)
            return id;
    }
    NodeId id;
    if (free_head_ != 0) {
        id = free_head_;
        free_head_ = nodes_[id].next;
        nodes_[id] = {v, lo, hi, buckets_[b], 0};
    } else {
        if (nodes_.size() >= capacity_)
            throw NodeCapacityError("BDD node capacity of " + std::to_string(capacity_) + " exhausted");
        id = static_cast<NodeId>(nodes_.size());
        nodes_.push_back({v, lo, hi, buckets_[b], 0});
    }
    buckets_[b] = id;
    ++live_;
    if (live_ > buckets_.size() * 2)
        grow_buckets();
    return id;
}

void Manager::maybe_gc()
{
    if (live_ > gc_threshold_)
        collect_garbage();
}

void Manager::collect_garbage()
{
    std::vector<bool> mark(nodes_.size(), false);
    mark[0] = mark[1] = true;
    std::vector<NodeId> stack;
    for (NodeId id = 2; id < nodes_.size(); ++id)
        if (nodes_[id].var != kDeadVar && nodes_[id].ref > 0)
            stack.push_back(id);
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        if (mark[id])
            continue;
        mark[id] = true;
        stack.push_back(nodes_[id].lo);
        stack.push_back(nodes_[id].hi);
    }
    free_head_ = 0;
    live_ = 2;
    for (auto id = static_cast<NodeId>(nodes_.size() - 1); id >= 2; --id) {
        if (mark[id]) {
            ++live_;
            continue;
        }
        nodes_[id].var = kDeadVar;
        nodes_[id].next = free_head_;
        free_head_ = id;
    }
    std::fill(buckets_.begin(), buckets_.end(), kNil);
    const std::size_t mask = buckets_.size() - 1;
    for (NodeId id = 2; id < nodes_.size(); ++id) {
        auto& n = nodes_[id];
        if (n.var == kDeadVar)
            continue;
        auto b = hash3(n.var, n.lo, n.hi) & mask;
        n.next = buckets_[b];
        buckets_[b] = id;
    }
    std::fill(cache_.begin(), cache_.end(), CacheEntry{});
    gc_threshold_ = std::max(gc_threshold_, live_ * 2);
}

bool Manager::cache_lookup(std::uint32_t op, NodeId a, NodeId b, NodeId c, NodeId& out) const
{
    const auto& e = cache_[hash3(op * 31 + a, b, c) & (cache_.size() - 1)];
    if (e.op == op && e.a == a && e.b == b && e.c == c) {
        out = e.result;
        return true;
    }
    return false;
}

void Manager::cache_store(std::uint32_t op, NodeId a, NodeId b, NodeId c, NodeId r)
{
    cache_[hash3(op * 31 + a, b, c) & (cache_.size() - 1)] = {op, a, b, c, r};
}

// ---------------------------------------------------------------- recursive kernels

NodeId Manager::and_rec(NodeId a, NodeId b)
{
    if (a == 0 || b == 0)
        return 0;
    if (a == 1)
        return b;
    if (b == 1 || a == b)
        return a;
    if (a > b)
        std::swap(a, b);
    NodeId r;
    if (cache_lookup(kOpAnd, a, b, 0, r))
        return r;
    const Var va = nodes_[a].var, vb = nodes_[b].var;
    const Var v = std::min(va, vb);
    NodeId a0 = va == v ? nodes_[a].lo : a, a1 = va == v ? nodes_[a].hi : a;
    NodeId b0 = vb == v ? nodes_[b].lo : b, b1 = vb == v ? nodes_[b].hi : b;
    NodeId lo = and_rec(a0, b0);
    NodeId hi = and_rec(a1, b1);
    r = mk(v, lo, hi);
    cache_store(kOpAnd, a, b, 0, r);
    return r;
}

NodeId Manager::or_rec(NodeId a, NodeId b)
{
    if (a == 1 || b == 1)
        return 1;
    if (a == 0)
        return b;
    if (b == 0 || a == b)
        return a;
    if (a > b)
        std::swap(a, b);
    NodeId r;
    if (cache_lookup(kOpOr, a, b, 0, r))
        return r;
    const Var va = nodes_[a].var, vb = nodes_[b].var;
    const Var v = std::min(va, vb);
    NodeId a0 = va == v ? nodes_[a].lo : a, a1 = va == v ? nodes_[a].hi : a;
    NodeId b0 = vb == v ? nodes_[b].lo : b, b1 = vb == v ? nodes_[b].hi : b;
    NodeId lo = or_rec(a0, b0);
    NodeId hi = or_rec(a1, b1);
    r = mk(v, lo, hi);
    cache_store(kOpOr, a, b, 0, r);
    return r;
}

NodeId Manager::xor_rec(NodeId a, NodeId b)
{
    if (a == b)
        return 0;
    if (a == 0)
        return b;
    if (b == 0)
        return a;
    if (a == 1)
        return not_rec(b);
    if (b == 1)
        return not_rec(a);
    if (a > b)
        std::swap(a, b);
    NodeId r;
    if (cache_lookup(kOpXor, a, b, 0, r))
        return r;
    const Var va = nodes_[a].var, vb = nodes_[b].var;
    const Var v = std::min(va, vb);
    NodeId a0 = va == v ? nodes_[a].lo : a, a1 = va == v ? nodes_[a].hi : a;
    NodeId b0 = vb == v ? nodes_[b].lo : b, b1 = vb == v ? nodes_[b].hi : b;
    NodeId lo = xor_rec(a0, b0);
    NodeId hi = xor_rec(a1, b1);
    r = mk(v, lo, hi);
    cache_store(kOpXor, a, b, 0, r);
    return r;
}

NodeId Manager::not_rec(NodeId a)
{
    if (a <= 1)
        return 1 - a;
    NodeId r;
    if (cache_lookup(kOpNot, a, 0, 0, r))
        return r;
    NodeId lo = not_rec(nodes_[a].lo);
    NodeId hi = not_rec(nodes_[a].hi);
    r = mk(nodes_[a].var, lo, hi);
    cache_store(kOpNot, a, 0, 0, r);
    return r;
}

NodeId Manager::ite_rec(NodeId f, NodeId g, NodeId h)
{
    if (f == 1)
        return g;
    if (f == 0)
        return h;
    if (g == h)
        return g;
    if (g == 1 && h == 0)
        return f;
    if (g == 0 && h == 1)
        return not_rec(f);
    if (g == 1)
        return or_rec(f, h);
    if (h == 0)
        return and_rec(f, g);
    NodeId r;
    if (cache_lookup(kOpIte, f, g, h, r))
        return r;
    const Var v = std::min({nodes_[f].var, nodes_[g].var, nodes_[h].var});
    auto lo_of = [&](NodeId x) { return nodes_[x].var == v ? nodes_[x].lo : x; };
    auto hi_of = [&](NodeId x) { return nodes_[x].var == v ? nodes_[x].hi : x; };
    NodeId lo = ite_rec(lo_of(f), lo_of(g), lo_of(h));
    NodeId hi = ite_rec(hi_of(f), hi_of(g), hi_of(h));
    r = mk(v, lo, hi);
    cache_store(kOpIte, f, g, h, r);
    return r;
}

NodeId Manager::exists_rec(NodeId f, NodeId cube)
{
    if (f <= 1 || cube == 1)
        return f;
    const Var v = nodes_[f].var;
    while (cube > 1 && nodes_[cube].var < v)
        cube = nodes_[cube].hi;
    if (cube == 1)
        return f;
    NodeId r;
    if (cache_lookup(kOpExists, f, cube, 0, r))
        return r;
    if (nodes_[cube].var == v) {
        NodeId next = nodes_[cube].hi;
        NodeId lo = exists_rec(nodes_[f].lo, next);
        r = lo == 1 ? 1 : or_rec(lo, exists_rec(nodes_[f].hi, next));
    } else {
        NodeId lo = exists_rec(nodes_[f].lo, cube);
        NodeId hi = exists_rec(nodes_[f].hi, cube);
        r = mk(v, lo, hi);
    }
    cache_store(kOpExists, f, cube, 0, r);
    return r;
}

NodeId Manager::and_exists_rec(NodeId f, NodeId g, NodeId cube)
{
    if (f == 0 || g == 0)
        return 0;
    if (f == 1 && g == 1)
        return 1;
    if (cube == 1)
        return and_rec(f, g);
    if (f == 1 || f == g)
        return exists_rec(g, cube);
    if (g == 1)
        return exists_rec(f, cube);
    if (f > g)
        std::swap(f, g);
    const Var vf = nodes_[f].var, vg = nodes_[g].var;
    const Var v = std::min(vf, vg);
    while (cube > 1 && nodes_[cube].var < v)
        cube = nodes_[cube].hi;
    if (cube == 1)
        return and_rec(f, g);
    NodeId r;
    if (cache_lookup(kOpAndExists, f, g, cube, r))
        return r;
    NodeId f0 = vf == v ? nodes_[f].lo : f, f1 = vf == v ? nodes_[f].hi : f;
    NodeId g0 = vg == v ? nodes_[g].lo : g, g1 = vg == v ? nodes_[g].hi : g;
    if (nodes_[cube].var == v) {
        NodeId next = nodes_[cube].hi;
        NodeId lo = and_exists_rec(f0, g0, next);
        r = lo == 1 ? 1 : or_rec(lo, and_exists_rec(f1, g1, next));
    } else {
        NodeId lo = and_exists_rec(f0, g0, cube);
        NodeId hi = and_exists_rec(f1, g1, cube);
        r = mk(v, lo, hi);
    }
    cache_store(kOpAndExists, f, g, cube, r);
    return r;
}

NodeId Manager::restrict_rec(NodeId f, Var v, bool value)
{
    if (f <= 1 || nodes_[f].var > v)
        return f;
    if (nodes_[f].var == v)
        return value ? nodes_[f].hi : nodes_[f].lo;
    NodeId r;
    if (cache_lookup(kOpRestrict, f, v, value ? 1 : 0, r))
        return r;
    NodeId lo = restrict_rec(nodes_[f].lo, v, value);
    NodeId hi = restrict_rec(nodes_[f].hi, v, value);
    r = mk(nodes_[f].var, lo, hi);
    cache_store(kOpRestrict, f, v, value ? 1 : 0, r);
    return r;
}

NodeId Manager::rename_rec(NodeId f, std::uint32_t rid)
{
    if (f <= 1)
        return f;
    const std::uint32_t op = kOpRenameBase + rid;
    NodeId r;
    if (cache_lookup(op, f, 0, 0, r))
        return r;
    NodeId lo = rename_rec(nodes_[f].lo, rid);
    NodeId hi = rename_rec(nodes_[f].hi, rid);
    Var nv = renamings_[rid][nodes_[f].var];
    const Var top_lo = nodes_[lo].var, top_hi = nodes_[hi].var;
    if (nv < top_lo && nv < top_hi) {
        r = mk(nv, lo, hi);
    } else {
        NodeId lit = mk(nv, 0, 1);
        r = ite_rec(lit, hi, lo);
    }
    cache_store(op, f, 0, 0, r);
    return r;
}

// ---------------------------------------------------------------- public operations

Bdd Manager::mk_var(Var v)
{
    if (v >= num_vars_)
        throw std::out_of_range("BDD variable index out of range");
    maybe_gc();
    return {this, mk(v, 0, 1)};
}

Bdd Manager::mk_nvar(Var v)
{
    if (v >= num_vars_)
        throw std::out_of_range("BDD variable index out of range");
    maybe_gc();
    return {this, mk(v, 1, 0)};
}

Bdd Manager::mk_cube(std::span<const Var> vars)
{
    std::vector<Var> sorted(vars.begin(), vars.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    maybe_gc();
    NodeId acc = 1;
    for (auto v : sorted) {
        if (v >= num_vars_)
            throw std::out_of_range("BDD variable index out of range");
        acc = mk(v, 0, acc);
    }
    return {this, acc};
}

Bdd Manager::mk_cube(const Cube& literals)
{
    Cube sorted = literals;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    maybe_gc();
    NodeId acc = 1;
    for (const auto& [v, pos] : sorted)
        acc = pos ? mk(v, 0, acc) : mk(v, acc, 0);
    return {this, acc};
}

Bdd Manager::apply_and(const Bdd& a, const Bdd& b)
{
    maybe_gc();
    return {this, and_rec(a.id(), b.id())};
}

Bdd Manager::apply_or(const Bdd& a, const Bdd& b)
{
    maybe_gc();
    return {this, or_rec(a.id(), b.id())};
}

Bdd Manager::apply_xor(const Bdd& a, const Bdd& b)
{
    maybe_gc();
    return {this, xor_rec(a.id(), b.id())};
}

Bdd Manager::apply_iff(const Bdd& a, const Bdd& b)
{
    maybe_gc();
    return {this, not_rec(xor_rec(a.id(), b.id()))};
}

Bdd Manager::apply_not(const Bdd& a)
{
    maybe_gc();
    return {this, not_rec(a.id())};
}

Bdd Manager::apply_diff(const Bdd& a, const Bdd& b)
{
    maybe_gc();
    return {this, and_rec(a.id(), not_rec(b.id()))};
}

Bdd Manager::ite(const Bdd& f, const Bdd& g, const Bdd& h)
{
    maybe_gc();
    return {this, ite_rec(f.id(), g.id(), h.id())};
}

Bdd Manager::exists(const Bdd& f, const Bdd& vars)
{
    maybe_gc();
    return {this, exists_rec(f.id(), vars.id())};
}

Bdd Manager::and_exists(const Bdd& f, const Bdd& g, const Bdd& vars)
{
    maybe_gc();
    return {this, and_exists_rec(f.id(), g.id(), vars.id())};
}

Bdd Manager::restrict(const Bdd& f, Var v, bool value)
{
    maybe_gc();
    return {this, restrict_rec(f.id(), v, value)};
}

Renaming Manager::make_renaming(std::span<const Var> from, std::span<const Var> to)
{
    if (from.size() != to.size())
        throw std::invalid_argument("renaming: from/to length mismatch");
    std::set<Var> fs(from.begin(), from.end()), ts(to.begin(), to.end());
    if (fs.size() != from.size() || ts.size() != to.size())
        throw std::invalid_argument("renaming: repeated variable");
    bool overlap = std::any_of(ts.begin(), ts.end(), [&](Var v) { return fs.count(v) != 0; });
    if (overlap && fs != ts)
        throw std::invalid_argument("renaming: source and target variable sets overlap");
    std::vector<Var> map(num_vars_);
    for (Var v = 0; v < num_vars_; ++v)
        map[v] = v;
    for (std::size_t k = 0; k < from.size(); ++k) {
        if (from[k] >= num_vars_ || to[k] >= num_vars_)
            throw std::out_of_range("renaming: variable index out of range");
        map[from[k]] = to[k];
    }
    Renaming r;
    r.id_ = static_cast<std::uint32_t>(renamings_.size());
    renamings_.push_back(std::move(map));
    return r;
}

Bdd Manager::rename(const Bdd& f, const Renaming& r)
{
    maybe_gc();
    return {this, rename_rec(f.id(), r.id())};
}

bool Manager::eval(const Bdd& f, const std::vector<bool>& assignment) const
{
    NodeId id = f.id();
    while (id > 1)
        id = assignment[nodes_[id].var] ? nodes_[id].hi : nodes_[id].lo;
    return id == 1;
}

double Manager::sat_count(const Bdd& f, std::span<const Var> vars) const
{
    std::vector<Var> sorted(vars.begin(), vars.end());
    std::sort(sorted.begin(), sorted.end());
    auto pos = [&](NodeId id) -> std::size_t {
        if (id <= 1)
            return sorted.size();
        auto it = std::lower_bound(sorted.begin(), sorted.end(), nodes_[id].var);
        if (it == sorted.end() || *it != nodes_[id].var)
            throw std::invalid_argument("sat_count: support not covered by the variable set");
        return static_cast<std::size_t>(it - sorted.begin());
    };
    std::unordered_map<NodeId, double> memo;
    std::function<double(NodeId)> count = [&](NodeId id) -> double {
        if (id <= 1)
            return id == 1 ? 1.0 : 0.0;
        if (auto it = memo.find(id); it != memo.end())
            return it->second;
        const auto p = pos(id);
        const NodeId lo = nodes_[id].lo, hi = nodes_[id].hi;
        double c = count(lo) * std::ldexp(1.0, static_cast<int>(pos(lo) - p - 1)) +
                   count(hi) * std::ldexp(1.0, static_cast<int>(pos(hi) - p - 1));
        memo.emplace(id, c);
        return c;
    };
    return count(f.id()) * std::ldexp(1.0, static_cast<int>(pos(f.id())));
}

std::vector<Var> Manager::support(const Bdd& f) const
{
    std::set<Var> vars;
    std::vector<bool> seen(nodes_.size(), false);
    std::vector<NodeId> stack{f.id()};
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        if (id <= 1 || seen[id])
            continue;
        seen[id] = true;
        vars.insert(nodes_[id].var);
        stack.push_back(nodes_[id].lo);
        stack.push_back(nodes_[id].hi);
    }
    return {vars.begin(), vars.end()};
}

std::size_t Manager::dag_size(const Bdd& f) const
{
    std::vector<bool> seen(nodes_.size(), false);
    std::vector<NodeId> stack{f.id()};
    std::size_t n = 0;
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        if (seen[id])
            continue;
        seen[id] = true;
        ++n;
        if (id > 1) {
            stack.push_back(nodes_[id].lo);
            stack.push_back(nodes_[id].hi);
        }
    }
    return n;
}

Cube Manager::pick_cube(const Bdd& f) const
{
    if (f.is_false())
        throw std::invalid_argument("pick_cube on the empty set");
    Cube out;
    for_each_cube(f, [&out](const Cube& c) {
        out = c;
        return false;
    });
    return out;
}

void Manager::for_each_cube(const Bdd& f, const std::function<bool(const Cube&)>& fn) const
{
    Cube path;
    bool stop = false;
    std::function<void(NodeId)> walk = [&](NodeId id) {
        if (stop || id == 0)
            return;
        if (id == 1) {
            if (!fn(path))
                stop = true;
            return;
        }
        path.emplace_back(nodes_[id].var, false);
        walk(nodes_[id].lo);
        path.back().second = true;
        walk(nodes_[id].hi);
        path.pop_back();
    };
    walk(f.id());
}

std::vector<Cube> Manager::enumerate_cubes(const Bdd& f) const
{
    std::vector<Cube> out;
    for_each_cube(f, [&out](const Cube& c) {
        out.push_back(c);
        return true;
    });
    return out;
}

std::string Manager::to_dot(const Bdd& f, const std::function<std::string(Var)>& name) const
{
    std::ostringstream os;
    os << "digraph bdd {\n  n0 [shape=box,label=\"0\"];\n  n1 [shape=box,label=\"1\"];\n";
    std::vector<bool> seen(nodes_.size(), false);
    std::vector<NodeId> stack{f.id()};
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        if (id <= 1 || seen[id])
            continue;
        seen[id] = true;
        const auto& n = nodes_[id];
        os << "  n" << id << " [label=\"" << (name ? name(n.var) : "x" + std::to_string(n.var)) << "\"];\n";
        os << "  n" << id << " -> n" << n.lo << " [style=dashed];\n";
        os << "  n" << id << " -> n" << n.hi << ";\n";
        stack.push_back(n.lo);
        stack.push_back(n.hi);
    }
    os << "}\n";
    return os.str();
}

} // namespace dps::bdd
