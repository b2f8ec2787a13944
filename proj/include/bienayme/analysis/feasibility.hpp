#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "bienayme/kernel/offspring.hpp"

namespace bienayme::analysis {

struct FeasibleSizes {
  std::int64_t N = 0;
  std::vector<char> feasible;  // index n in [0, N]
  std::int64_t period = 0;     // gcd of differences; 0 when fewer than two values
  std::int64_t offset = 0;     // smallest feasible value mod period
  bool provisional = false;    // reachable sets did not stabilize within the cap
  // Every value in [N/2, N] on the lattice is feasible, so the pattern is
  // extended beyond N.
  bool periodic_tail = false;

  bool contains(std::int64_t n) const;
  std::vector<std::int64_t> values() const;
};

// Least fixed point of the reachable #_lambda sets per root type, capped at N
// (lambda taken from the family).
FeasibleSizes feasible_sizes(const kernel::OffspringFamily& family, std::int64_t N = 64);

// Reference: #_lambda of every tree with at most max_vertices vertices.
std::set<std::int64_t> feasible_sizes_bruteforce(const kernel::OffspringFamily& family, int max_vertices);

}  // namespace bienayme::analysis
