#include "dps/sat.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dps::sat {

namespace {
constexpr std::uint32_t kNoLit = 0xffffffffU;
}

int Solver::new_var()
{
    ensure_var(num_vars_ + 1);
    return num_vars_;
}

void Solver::reserve_vars(int n)
{
    ensure_var(n);
}

void Solver::ensure_var(int v)
{
    if (v <= num_vars_)
        return;
    num_vars_ = v;
    const auto n = static_cast<std::size_t>(v) + 1;
    assign_.resize(n, 0);
    level_.resize(n, 0);
    reason_.resize(n, -1);
    seen_.resize(n, false);
    watches_.resize(2 * n);
}

void Solver::enqueue(ILit l, int reason)
{
    const auto v = l >> 1;
    assign_[v] = (l & 1U) ? -1 : 1;
    level_[v] = static_cast<int>(trail_lim_.size());
    reason_[v] = reason;
    trail_.push_back(l);
}

int Solver::attach(std::vector<ILit> c)
{
    const int ci = static_cast<int>(db_.size());
    watches_[c[0]].push_back(ci);
    watches_[c[1]].push_back(ci);
    db_.push_back(std::move(c));
    return ci;
}

void Solver::add_clause(Clause c)
{
    original_.push_back(c);
    for (auto l : c) {
        if (l == 0)
            throw std::invalid_argument("literal 0 is not a valid literal");
        ensure_var(std::abs(l));
    }
    backtrack(0);
    if (inconsistent_)
        return;
    std::vector<ILit> lits;
    for (auto l : c)
        lits.push_back(to_internal(l));
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    std::vector<ILit> kept;
    for (std::size_t k = 0; k < lits.size(); ++k) {
        if (k + 1 < lits.size() && (lits[k] ^ 1U) == lits[k + 1])
            return; // tautology
        const int v = lit_value(lits[k]);
        if (v == 1)
            return; // satisfied at the top level
        if (v == 0)
            kept.push_back(lits[k]);
    }
    if (kept.empty()) {
        inconsistent_ = true;
        return;
    }
    if (kept.size() == 1) {
        enqueue(kept[0], -1);
        if (propagate() != -1)
            inconsistent_ = true;
        return;
    }
    attach(std::move(kept));
}

int Solver::propagate()
{
    while (qhead_ < trail_.size()) {
        const ILit p = trail_[qhead_++];
        const ILit falsified = p ^ 1U;
        ++stats_.propagations;
        auto& ws = watches_[falsified];
        std::size_t i = 0, j = 0;
        int conflict = -1;
        while (i < ws.size()) {
            const int ci = ws[i++];
            auto& c = db_[ci];
            if (c[0] == falsified)
                std::swap(c[0], c[1]);
            if (lit_value(c[0]) == 1) {
                ws[j++] = ci;
                continue;
            }
            bool moved = false;
            for (std::size_t k = 2; k < c.size(); ++k) {
                if (lit_value(c[k]) != -1) {
                    std::swap(c[1], c[k]);
                    watches_[c[1]].push_back(ci);
                    moved = true;
                    break;
                }
            }
            if (moved)
                continue;
            ws[j++] = ci;
            if (lit_value(c[0]) == -1) {
                conflict = ci;
                while (i < ws.size())
                    ws[j++] = ws[i++];
            } else {
                enqueue(c[0], ci);
            }
        }
        ws.resize(j);
        if (conflict != -1)
            return conflict;
    }
    return -1;
}

void Solver::analyze(int conflict, std::vector<ILit>& learnt, int& backtrack_level)
{
    const int current = static_cast<int>(trail_lim_.size());
    learnt.assign(1, kNoLit);
    int path = 0;
    ILit p = kNoLit;
    std::size_t idx = trail_.size();
    int ci = conflict;
    do {
        const auto& c = db_[ci];
        for (std::size_t k = (p == kNoLit ? 0 : 1); k < c.size(); ++k) {
            const ILit q = c[k];
            const auto v = q >> 1;
            if (seen_[v] || level_[v] == 0)
                continue;
            seen_[v] = true;
            if (level_[v] >= current)
                ++path;
            else
                learnt.push_back(q);
        }
        do {
            --idx;
        } while (!seen_[trail_[idx] >> 1]);
        p = trail_[idx];
        ci = reason_[p >> 1];
        seen_[p >> 1] = false;
        --path;
    } while (path > 0);
    learnt[0] = p ^ 1U;

    backtrack_level = 0;
    std::size_t best = 1;
    for (std::size_t k = 1; k < learnt.size(); ++k) {
        seen_[learnt[k] >> 1] = false;
        if (level_[learnt[k] >> 1] > backtrack_level) {
            backtrack_level = level_[learnt[k] >> 1];
            best = k;
        }
    }
    if (learnt.size() > 1)
        std::swap(learnt[1], learnt[best]);
}

void Solver::analyze_final(ILit failed)
{
    core_.assign(1, to_external(failed));
    const auto fv = failed >> 1;
    if (level_[fv] == 0)
        return;
    seen_[fv] = true;
    for (std::size_t i = trail_.size(); i-- > trail_lim_[0];) {
        const auto v = trail_[i] >> 1;
        if (!seen_[v])
            continue;
        if (reason_[v] == -1) {
            core_.push_back(to_external(trail_[i]));
        } else {
            const auto& c = db_[reason_[v]];
            for (std::size_t k = 1; k < c.size(); ++k)
                if (level_[c[k] >> 1] > 0)
                    seen_[c[k] >> 1] = true;
        }
        seen_[v] = false;
    }
    seen_[fv] = false;
}

void Solver::backtrack(int level)
{
    if (static_cast<int>(trail_lim_.size()) <= level)
        return;
    const std::size_t keep = trail_lim_[level];
    for (std::size_t i = trail_.size(); i-- > keep;) {
        const auto v = trail_[i] >> 1;
        assign_[v] = 0;
        reason_[v] = -1;
    }
    trail_.resize(keep);
    trail_lim_.resize(level);
    qhead_ = std::min(qhead_, keep);
}

Result Solver::solve(const std::vector<Lit>& assumptions)
{
    ++stats_.solves;
    core_.clear();
    for (auto a : assumptions)
        ensure_var(std::abs(a));
    backtrack(0);
    if (inconsistent_)
        return Result::Unsat;
    if (propagate() != -1) {
        inconsistent_ = true;
        return Result::Unsat;
    }

    std::vector<ILit> learnt;
    while (true) {
        const int conflict = propagate();
        if (conflict != -1) {
            ++stats_.conflicts;
            if (trail_lim_.empty()) {
                inconsistent_ = true;
                return Result::Unsat;
            }
            int bt = 0;
            analyze(conflict, learnt, bt);
            backtrack(bt);
            if (learnt.size() == 1)
                enqueue(learnt[0], -1);
            else
                enqueue(learnt[0], attach(learnt));
            continue;
        }

        ILit next = kNoLit;
        while (trail_lim_.size() < assumptions.size()) {
            const ILit a = to_internal(assumptions[trail_lim_.size()]);
            const int v = lit_value(a);
            if (v == 1) {
                trail_lim_.push_back(trail_.size());
            } else if (v == -1) {
                analyze_final(a);
                backtrack(0);
                return Result::Unsat;
            } else {
                next = a;
                break;
            }
        }
        if (next == kNoLit) {
            for (int v = 1; v <= num_vars_; ++v)
                if (assign_[v] == 0) {
                    next = static_cast<ILit>(2 * v + 1);
                    break;
                }
        }
        if (next == kNoLit) {
            model_.assign(static_cast<std::size_t>(num_vars_) + 1, false);
            for (int v = 1; v <= num_vars_; ++v)
                model_[v] = assign_[v] == 1;
            backtrack(0);
            return Result::Sat;
        }
        ++stats_.decisions;
        trail_lim_.push_back(trail_.size());
        enqueue(next, -1);
    }
}

bool Solver::value(int var) const
{
    return var > 0 && static_cast<std::size_t>(var) < model_.size() && model_[var];
}

std::vector<bool> Solver::model() const
{
    return model_;
}

void Solver::write_dimacs(std::ostream& os) const
{
    os << "p cnf " << num_vars_ << ' ' << original_.size() << '\n';
    for (const auto& c : original_) {
        for (auto l : c)
            os << l << ' ';
        os << "0\n";
    }
}

std::vector<Lit> minimize_core(Solver& solver, std::vector<Lit> core)
{
    std::size_t i = 0;
    while (i < core.size()) {
        std::vector<Lit> trial;
        for (std::size_t k = 0; k < core.size(); ++k)
            if (k != i)
                trial.push_back(core[k]);
        if (solver.solve(trial) == Result::Unsat) {
            const auto& found = solver.core();
            std::vector<Lit> kept;
            for (auto l : trial)
                if (std::find(found.begin(), found.end(), l) != found.end())
                    kept.push_back(l);
            core = std::move(kept);
        } else {
            ++i;
        }
    }
    return core;
}

void add_at_most_k(Solver& solver, const std::vector<Lit>& lits, int k)
{
    const auto n = static_cast<int>(lits.size());
    if (k >= n)
        return;
    if (k <= 0) {
        for (auto l : lits)
            solver.add_clause({-l});
        return;
    }
    // s[i][j]: at least j+1 of lits[0..i] are true.
    std::vector<std::vector<Lit>> s(n - 1, std::vector<Lit>(k));
    for (auto& row : s)
        for (auto& v : row)
            v = solver.new_var();
    solver.add_clause({-lits[0], s[0][0]});
    for (int j = 1; j < k; ++j)
        solver.add_clause({-s[0][j]});
    for (int i = 1; i < n - 1; ++i) {
        solver.add_clause({-lits[i], s[i][0]});
        solver.add_clause({-s[i - 1][0], s[i][0]});
        for (int j = 1; j < k; ++j) {
            solver.add_clause({-lits[i], -s[i - 1][j - 1], s[i][j]});
            solver.add_clause({-s[i - 1][j], s[i][j]});
        }
        solver.add_clause({-lits[i], -s[i - 1][k - 1]});
    }
    solver.add_clause({-lits[n - 1], -s[n - 2][k - 1]});
}

void read_dimacs(std::istream& is, Solver& solver)
{
    std::string line;
    bool header = false;
    Clause current;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == 'c' || line[0] == '%')
            continue;
        std::istringstream ls(line);
        if (line[0] == 'p') {
            std::string p, cnf;
            int vars = 0, clauses = 0;
            if (!(ls >> p >> cnf >> vars >> clauses) || cnf != "cnf")
                throw std::runtime_error("malformed DIMACS header: " + line);
            solver.reserve_vars(vars);
            header = true;
            continue;
        }
        if (!header)
            throw std::runtime_error("DIMACS clause before header");
        Lit l = 0;
        while (ls >> l) {
            if (l == 0) {
                solver.add_clause(current);
                current.clear();
            } else {
                current.push_back(l);
            }
        }
        if (!ls.eof())
            throw std::runtime_error("malformed DIMACS clause line: " + line);
    }
    if (!current.empty())
        solver.add_clause(current);
}

} // namespace dps::sat
