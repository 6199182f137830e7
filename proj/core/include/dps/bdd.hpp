#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dps::bdd {

class Manager;

/// Raised when the node table would grow past its configured capacity.
class NodeCapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Var = std::uint32_t;
using NodeId = std::uint32_t;

/// A conjunction of literals (variable, polarity), sorted by variable.
using Cube = std::vector<std::pair<Var, bool>>;

/// Reference-counted handle to a node of a Manager. Handles must not outlive their manager.
class Bdd {
public:
    Bdd() = default;
    Bdd(const Bdd& other);
    Bdd(Bdd&& other) noexcept;
    Bdd& operator=(const Bdd& other);
    Bdd& operator=(Bdd&& other) noexcept;
    ~Bdd();

    [[nodiscard]] bool is_true() const { return id_ == 1; }
    [[nodiscard]] bool is_false() const { return id_ == 0; }
    [[nodiscard]] bool valid() const { return mgr_ != nullptr; }
    [[nodiscard]] NodeId id() const { return id_; }
    [[nodiscard]] Manager* manager() const { return mgr_; }

    bool operator==(const Bdd& other) const { return id_ == other.id_ && mgr_ == other.mgr_; }

    Bdd operator&(const Bdd& o) const;
    Bdd operator|(const Bdd& o) const;
    Bdd operator^(const Bdd& o) const;
    Bdd operator!() const;
    Bdd operator~() const { return !*this; }
    Bdd& operator&=(const Bdd& o) { return *this = *this & o; }
    Bdd& operator|=(const Bdd& o) { return *this = *this | o; }

private:
    friend class Manager;
    Bdd(Manager* mgr, NodeId id);

    Manager* mgr_ = nullptr;
    NodeId id_ = 0;
};

/// Simultaneous variable substitution, registered with a manager so results can be cached.
class Renaming {
public:
    [[nodiscard]] std::uint32_t id() const { return id_; }

private:
    friend class Manager;
    std::uint32_t id_ = 0;
};

/// Reduced ordered BDD manager with a fixed variable order (variable index = level).
///
/// Nodes are hash-consed, so semantic equality is handle equality. Garbage collection
/// runs between top-level operations: nodes not reachable from a live handle are reclaimed.
class Manager {
public:
    explicit Manager(std::uint32_t num_vars, std::size_t node_capacity = std::size_t{1} << 24);
    Manager(const Manager&) = delete;
    Manager& operator=(const Manager&) = delete;

    [[nodiscard]] std::uint32_t num_vars() const { return num_vars_; }

    Bdd mk_true() { return {this, 1}; }
    Bdd mk_false() { return {this, 0}; }
    Bdd mk_var(Var v);
    Bdd mk_nvar(Var v);
    /// Conjunction of the given positive literals.
    Bdd mk_cube(std::span<const Var> vars);
    Bdd mk_cube(const Cube& literals);

    Bdd apply_and(const Bdd& a, const Bdd& b);
    Bdd apply_or(const Bdd& a, const Bdd& b);
    Bdd apply_xor(const Bdd& a, const Bdd& b);
    Bdd apply_iff(const Bdd& a, const Bdd& b);
    Bdd apply_not(const Bdd& a);
    /// a ∧ ¬b
    Bdd apply_diff(const Bdd& a, const Bdd& b);
    Bdd ite(const Bdd& f, const Bdd& g, const Bdd& h);

    /// ∃ vars. f, where `vars` is a positive cube.
    Bdd exists(const Bdd& f, const Bdd& vars);
    Bdd exists(const Bdd& f, std::span<const Var> vars) { return exists(f, mk_cube(vars)); }
    /// ∃ vars. (f ∧ g) without building the conjunction.
    Bdd and_exists(const Bdd& f, const Bdd& g, const Bdd& vars);
    Bdd restrict(const Bdd& f, Var v, bool value);

    /// Registers from[k] := to[k]. Throws std::invalid_argument on length mismatch or on an
    /// overlap between the two sets that is not a permutation of one set.
    Renaming make_renaming(std::span<const Var> from, std::span<const Var> to);
    Bdd rename(const Bdd& f, const Renaming& r);

    [[nodiscard]] bool eval(const Bdd& f, const std::vector<bool>& assignment) const;
    /// Number of satisfying assignments over `vars` (must cover the support of f).
    [[nodiscard]] double sat_count(const Bdd& f, std::span<const Var> vars) const;
    [[nodiscard]] std::vector<Var> support(const Bdd& f) const;
    [[nodiscard]] std::size_t dag_size(const Bdd& f) const;

    /// First satisfying cube (low branches first). Throws std::invalid_argument on false.
    [[nodiscard]] Cube pick_cube(const Bdd& f) const;
    /// Disjoint cube cover of f in deterministic order; `fn` returning false stops the walk.
    void for_each_cube(const Bdd& f, const std::function<bool(const Cube&)>& fn) const;
    [[nodiscard]] std::vector<Cube> enumerate_cubes(const Bdd& f) const;

    [[nodiscard]] std::string to_dot(const Bdd& f, const std::function<std::string(Var)>& name = {}) const;

    [[nodiscard]] std::size_t live_nodes() const { return live_; }
    void collect_garbage();

    Var top_var(const Bdd& f) const { return nodes_[f.id()].var; }

private:
    friend class Bdd;

    struct Node {
        Var var;
        NodeId lo;
        NodeId hi;
        NodeId next;
        std::uint32_t ref;
    };

    struct CacheEntry {
        std::uint32_t op = 0;
        NodeId a = 0, b = 0, c = 0;
        NodeId result = 0;
    };

    enum Op : std::uint32_t {
        kOpNone = 0,
        kOpAnd,
        kOpOr,
        kOpXor,
        kOpNot,
        kOpIte,
        kOpExists,
        kOpAndExists,
        kOpRestrict,
        kOpRenameBase, // + renaming id
    };

    void inc(NodeId id)
    {
        if (id > 1)
            ++nodes_[id].ref;
    }
    void dec(NodeId id)
    {
        if (id > 1)
            --nodes_[id].ref;
    }

    NodeId mk(Var v, NodeId lo, NodeId hi);
    void grow_buckets();
    void maybe_gc();

    bool cache_lookup(std::uint32_t op, NodeId a, NodeId b, NodeId c, NodeId& out) const;
    void cache_store(std::uint32_t op, NodeId a, NodeId b, NodeId c, NodeId r);

    NodeId and_rec(NodeId a, NodeId b);
    NodeId or_rec(NodeId a, NodeId b);
    NodeId xor_rec(NodeId a, NodeId b);
    NodeId not_rec(NodeId a);
    NodeId ite_rec(NodeId f, NodeId g, NodeId h);
    NodeId exists_rec(NodeId f, NodeId cube);
    NodeId and_exists_rec(NodeId f, NodeId g, NodeId cube);
    NodeId restrict_rec(NodeId f, Var v, bool value);
    NodeId rename_rec(NodeId f, std::uint32_t rid);

    std::uint32_t num_vars_;
    std::size_t capacity_;
    std::vector<Node> nodes_;
    std::vector<NodeId> buckets_;
    NodeId free_head_ = 0; // 0 = empty free list (terminal ids are never freed)
    std::size_t live_ = 2;
    std::size_t gc_threshold_ = std::size_t{1} << 18;
    std::vector<CacheEntry> cache_;
    std::vector<std::vector<Var>> renamings_;
};

} // namespace dps::bdd
