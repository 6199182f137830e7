#pragma once

#include "dps/model.hpp"

#include <string>
#include <vector>

namespace dps {

enum class PhilosopherArch { None, Clockwise, CounterClockwise, Full };

/// Philosophers Phil0..Phil(n-1) followed by forks Fork0..Fork(n-1). Phil i uses Fork i as its
/// left fork and Fork (i+1) mod n as its right fork; its interactions are takeLeft<i>,
/// takeRight<i> and release<i>. Counter-clockwise: Phil i informs Phil i+1 (its right
/// neighbour); clockwise: Phil i informs Phil i-1. Risk is empty; the requirement is
/// deadlock freedom.
[[nodiscard]] Model gen_philosophers(int n, PhilosopherArch arch);

/// Processors A, B, … each allocate two of their three nearest memory banks 1..n
/// (interactions <cpu><bank>), work, release both, and toggle readiness through idle<cpu>.
/// With four processors the nearest banks are A{1,2,3}, B{1,2,4}, C{1,3,4}, D{2,3,4};
/// otherwise processor i uses banks i, i+1, i+2 (cyclically, 1-based).
/// `broadcasters` lists processors that inform every other processor; `local` adds
/// mutual informs pairs between ring neighbours.
[[nodiscard]] Model gen_multicore(int cpus, const std::vector<std::string>& broadcasters, bool local = false);

/// n robots on a 3-row grid of `cells` cells (cells divisible by 3); robot i starts in cell i
/// and moves with up<i>, down<i>, left<i>, right<i>. Risk: all robots in the same cell.
/// Robot i informs robot (i+1) mod n.
[[nodiscard]] Model gen_robots(int n, int cells);

[[nodiscard]] PhilosopherArch parse_philosopher_arch(const std::string& s);
[[nodiscard]] std::string philosopher_arch_name(PhilosopherArch a);

/// Parses "broadcast-A", "broadcast-A,D", "local" or "local-A,D" (local plus broadcasters).
struct MulticorePattern {
    std::vector<std::string> broadcasters;
    bool local = false;
};
[[nodiscard]] MulticorePattern parse_multicore_pattern(const std::string& s);

} // namespace dps
