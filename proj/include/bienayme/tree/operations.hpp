#pragma once

#include <map>
#include <vector>

#include "bienayme/tree/plane_tree.hpp"

namespace bienayme::tree {

// Blobs of a tree whose root has type 0. A type-0 vertex owns the blob it
// roots; it appears in its parent's blob only as a frontier vertex.
struct Blobs {
  std::vector<int> owner;  // blob root of every vertex (type-0 vertices own themselves)
  std::vector<int> roots;  // type-0 vertices in DFS order

  // Non-root members of the blob of x, in DFS order (excludes frontier).
  std::vector<int> members(const MultitypeTree& t, int x) const;
  // Type-0 vertices whose parent lies in the blob of x, in DFS order.
  std::vector<int> frontier(const MultitypeTree& t, int x) const;
  // 1 + number of non-type-0 members.
  std::vector<int> sizes() const;
};

Blobs blobs(const MultitypeTree& t);

PlaneTree reduce(const MultitypeTree& t);

// alpha(v) for every type-0 vertex v of a flat tree, indexed by the rank of v
// among the type-0 vertices in DFS order.
using Decoration = std::vector<MultitypeTree>;

struct Flattened {
  MultitypeTree flat;
  Decoration decoration;  // induced decoration: the blobs of the input tree
};

Flattened flatten(const MultitypeTree& t);

bool is_flat(const MultitypeTree& t);

struct BlowUp {
  MultitypeTree tree;
  std::vector<int> phi;  // type-0 rank in tau -> vertex of the blown-up tree
};

// Throws DecorationMismatch if some alpha(v) does not fit v.
BlowUp blow_up(const MultitypeTree& tau, const Decoration& alpha);

// Checks that alpha fits a type-0 vertex of tau with the given child-type
// counts (over all types).
bool decoration_fits(const MultitypeTree& alpha, const std::vector<int>& child_counts);

struct DegreeEntry {
  int type = 0;
  std::vector<int> counts;  // children per type
  auto operator<=>(const DegreeEntry&) const = default;
};

// Sorted multiset.
using DegreeSequence = std::vector<DegreeEntry>;

DegreeSequence degree_sequence(const MultitypeTree& t, int num_types);
bool admissible(const DegreeSequence& seq, int num_types);

// d -> number of vertices with exactly d children (plane tree) or with
// exactly d type-0 children among type-0 vertices (multitype tree).
std::map<int, std::int64_t> n_d_counts(const PlaneTree& t);
std::map<int, std::int64_t> n_d_counts(const MultitypeTree& t);

int max_outdegree(const PlaneTree& t);

}  // namespace bienayme::tree
