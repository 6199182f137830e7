#include "dps/bdd.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace dps::bdd;

namespace {

constexpr Var kVars = 8;

/// Truth table over kVars variables: bit k = value under assignment k.
using Table = std::vector<bool>;

struct Formula {
    Bdd f;
    Table t;
};

std::vector<bool> assignment(std::uint32_t k)
{
    std::vector<bool> a(kVars);
    for (Var v = 0; v < kVars; ++v)
        a[v] = (k >> v) & 1U;
    return a;
}

Formula random_formula(Manager& m, std::mt19937& rng, int depth)
{
    std::uniform_int_distribution<int> pick(0, 5);
    const std::uint32_t n = 1U << kVars;
    if (depth == 0 || pick(rng) == 0) {
        Var v = std::uniform_int_distribution<Var>(0, kVars - 1)(rng);
        Table t(n);
        for (std::uint32_t k = 0; k < n; ++k)
            t[k] = (k >> v) & 1U;
        return {m.mk_var(v), t};
    }
    auto a = random_formula(m, rng, depth - 1);
    auto b = random_formula(m, rng, depth - 1);
    Table t(n);
    switch (pick(rng) % 4) {
    case 0:
        for (std::uint32_t k = 0; k < n; ++k)
            t[k] = a.t[k] && b.t[k];
        return {a.f & b.f, t};
    case 1:
        for (std::uint32_t k = 0; k < n; ++k)
            t[k] = a.t[k] || b.t[k];
        return {a.f | b.f, t};
    case 2:
        for (std::uint32_t k = 0; k < n; ++k)
            t[k] = a.t[k] != b.t[k];
        return {a.f ^ b.f, t};
    default:
        for (std::uint32_t k = 0; k < n; ++k)
            t[k] = !a.t[k];
        return {!a.f, t};
    }
}

void expect_table(Manager& m, const Bdd& f, const Table& t)
{
    for (std::uint32_t k = 0; k < t.size(); ++k)
        ASSERT_EQ(m.eval(f, assignment(k)), t[k]) << "assignment " << k;
}

} // namespace

TEST(Bdd, Constants)
{
    Manager m(4);
    Bdd v = m.mk_var(1);
    EXPECT_TRUE((v & !v).is_false());
    EXPECT_TRUE((m.mk_true() | v).is_true());
    EXPECT_TRUE(m.restrict(v, 1, true).is_true());
    EXPECT_TRUE(m.apply_diff(v, v).is_false());
}

TEST(Bdd, DisjointProduct)
{
    Manager m(4);
    Bdd a = m.mk_var(0), b = m.mk_var(2);
    std::vector<Var> all{0, 1, 2, 3};
    EXPECT_DOUBLE_EQ(m.sat_count(a & b, all), 4.0);
}

TEST(Bdd, Canonicity)
{
    Manager m(3);
    Bdd a = m.mk_var(0), b = m.mk_var(1), c = m.mk_var(2);
    EXPECT_EQ(a & (b | c), (a & b) | (a & c));
    EXPECT_EQ(!(a & b), !a | !b);
}

TEST(Bdd, RandomOperationsMatchTruthTables)
{
    Manager m(kVars);
    std::mt19937 rng(7);
    for (int round = 0; round < 200; ++round) {
        auto a = random_formula(m, rng, 4);
        auto b = random_formula(m, rng, 4);
        expect_table(m, a.f, a.t);
        Table t_and(a.t.size()), t_or(a.t.size()), t_iff(a.t.size()), t_diff(a.t.size());
        for (std::size_t k = 0; k < a.t.size(); ++k) {
            t_and[k] = a.t[k] && b.t[k];
            t_or[k] = a.t[k] || b.t[k];
            t_iff[k] = a.t[k] == b.t[k];
            t_diff[k] = a.t[k] && !b.t[k];
        }
        expect_table(m, m.apply_and(a.f, b.f), t_and);
        expect_table(m, m.apply_or(a.f, b.f), t_or);
        expect_table(m, m.apply_iff(a.f, b.f), t_iff);
        expect_table(m, m.apply_diff(a.f, b.f), t_diff);
        // De Morgan
        EXPECT_EQ(!(a.f & b.f), !a.f | !b.f);
        EXPECT_EQ(!(a.f | b.f), !a.f & !b.f);
    }
}

TEST(Bdd, ExistsMatchesProjection)
{
    Manager m(kVars);
    std::mt19937 rng(11);
    for (int round = 0; round < 150; ++round) {
        auto a = random_formula(m, rng, 4);
        std::vector<Var> q;
        for (Var v = 0; v < kVars; ++v)
            if (rng() % 3 == 0)
                q.push_back(v);
        Table t(a.t.size());
        for (std::uint32_t k = 0; k < t.size(); ++k) {
            std::uint32_t mask = 0;
            for (auto v : q)
                mask |= 1U << v;
            bool any = false;
            for (std::uint32_t sub = mask;; sub = (sub - 1) & mask) {
                any = any || a.t[(k & ~mask) | sub];
                if (sub == 0)
                    break;
            }
            t[k] = any;
        }
        expect_table(m, m.exists(a.f, q), t);

        auto b = random_formula(m, rng, 3);
        EXPECT_EQ(m.and_exists(a.f, b.f, m.mk_cube(q)), m.exists(a.f & b.f, q));
    }
}

TEST(Bdd, ExistsBasics)
{
    Manager m(3);
    Bdd v = m.mk_var(0), w = m.mk_var(1);
    std::vector<Var> only_v{0};
    EXPECT_EQ(m.exists(v & w, only_v), w);
    std::vector<Var> all{0, 1, 2};
    EXPECT_TRUE(m.exists(v & !w, all).is_true());
}

TEST(Bdd, RenameMatchesTruthTables)
{
    Manager m(kVars);
    std::mt19937 rng(5);
    // Even variables to their odd neighbour.
    std::vector<Var> from{0, 2, 4, 6}, to{1, 3, 5, 7};
    auto r = m.make_renaming(from, to);
    auto back = m.make_renaming(to, from);
    for (int round = 0; round < 100; ++round) {
        auto a = random_formula(m, rng, 4);
        Bdd only_even = m.exists(a.f, to);
        Bdd renamed = m.rename(only_even, r);
        EXPECT_EQ(m.rename(renamed, back), only_even);
        for (std::uint32_t k = 0; k < (1U << kVars); ++k) {
            auto asg = assignment(k);
            std::vector<bool> src(kVars, false);
            for (std::size_t i = 0; i < from.size(); ++i)
                src[from[i]] = asg[to[i]];
            ASSERT_EQ(m.eval(renamed, asg), m.eval(only_even, src));
        }
    }
}

TEST(Bdd, RenameSwapPermutation)
{
    Manager m(4);
    std::vector<Var> from{0, 1}, to{1, 0};
    auto r = m.make_renaming(from, to);
    Bdd f = m.mk_var(0) & !m.mk_var(1);
    EXPECT_EQ(m.rename(f, r), m.mk_var(1) & !m.mk_var(0));
}

TEST(Bdd, RenamingErrors)
{
    Manager m(4);
    std::vector<Var> a{0, 1}, b{1};
    EXPECT_THROW((void)m.make_renaming(a, b), std::invalid_argument);
    std::vector<Var> c{1, 2};
    EXPECT_THROW((void)m.make_renaming(a, c), std::invalid_argument);
}

TEST(Bdd, CubesCoverExactly)
{
    Manager m(kVars);
    std::mt19937 rng(3);
    for (int round = 0; round < 100; ++round) {
        auto a = random_formula(m, rng, 4);
        Bdd cover = m.mk_false();
        for (const auto& cube : m.enumerate_cubes(a.f)) {
            Bdd c = m.mk_cube(cube);
            EXPECT_TRUE((cover & c).is_false()) << "cubes must be disjoint";
            cover |= c;
        }
        EXPECT_EQ(cover, a.f);
    }
}

TEST(Bdd, PickCube)
{
    Manager m(3);
    Bdd v = m.mk_var(1);
    auto cube = m.pick_cube(v);
    ASSERT_EQ(cube.size(), 1U);
    EXPECT_EQ(cube[0], std::make_pair(Var{1}, true));
    EXPECT_EQ(m.enumerate_cubes(m.mk_var(0) | m.mk_var(1)).size(), 2U);
    EXPECT_THROW((void)m.pick_cube(m.mk_false()), std::invalid_argument);
}

TEST(Bdd, GarbageCollectionKeepsLiveHandles)
{
    Manager m(kVars);
    std::mt19937 rng(9);
    auto keep = random_formula(m, rng, 5);
    for (int round = 0; round < 50; ++round)
        (void)random_formula(m, rng, 5);
    m.collect_garbage();
    expect_table(m, keep.f, keep.t);
    auto again = random_formula(m, rng, 5);
    expect_table(m, again.f, again.t);
}

TEST(Bdd, CapacityExhaustionThrows)
{
    Manager m(16, 40);
    Bdd acc = m.mk_false();
    EXPECT_THROW(
        {
            for (Var v = 0; v + 1 < 16; v += 2)
                acc = acc ^ (m.mk_var(v) & m.mk_var(v + 1));
        },
        NodeCapacityError);
}

TEST(Bdd, DotExport)
{
    Manager m(2);
    auto dot = m.to_dot(m.mk_var(0) & m.mk_var(1));
    EXPECT_NE(dot.find("digraph"), std::string::npos);
    EXPECT_NE(dot.find("x1"), std::string::npos);
}
