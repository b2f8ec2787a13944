#include "bienayme/tree/operations.hpp"

#include <algorithm>
#include <string>

#include "bienayme/errors.hpp"

namespace bienayme::tree {

namespace {

void require_root_type(const MultitypeTree& t) {
  if (t.type(0) != 0) throw Error(ErrorKind::kRootType, "root must have type 1");
}

// Flat children of x: blob members other than x and the frontier, in DFS
// order, stably sorted by type.
std::vector<int> flat_children(const MultitypeTree& t, int x) {
  std::vector<int> out;
  const int end = t.shape.subtree_end(x);
  for (int v = x + 1; v < end;) {
    if (t.type(v) == 0) {
      out.push_back(v);
      v = t.shape.subtree_end(v);
    } else {
      out.push_back(v);
      ++v;
    }
  }
  std::stable_sort(out.begin(), out.end(), [&](int u, int v) { return t.type(u) < t.type(v); });
  return out;
}

// Subtree of t consisting of x, its blob members, and its frontier as leaves.
MultitypeTree blob_tree(const MultitypeTree& t, int x) {
  std::vector<int> parent{-1};
  std::vector<int> types{0};
  std::vector<std::pair<int, int>> path{{x, 0}};
  const int end = t.shape.subtree_end(x);
  for (int v = x + 1; v < end;) {
    while (path.back().first != t.shape.parent(v)) path.pop_back();
    const int idx = static_cast<int>(parent.size());
    parent.push_back(path.back().second);
    types.push_back(t.type(v));
    if (t.type(v) == 0) {
      v = t.shape.subtree_end(v);
    } else {
      path.emplace_back(v, idx);
      ++v;
    }
  }
  return MultitypeTree(PlaneTree::from_parents(std::move(parent)), std::move(types));
}

}  // namespace

std::vector<int> Blobs::members(const MultitypeTree& t, int x) const {
  std::vector<int> out;
  const int end = t.shape.subtree_end(x);
  for (int v = x + 1; v < end;) {
    if (t.type(v) == 0) {
      v = t.shape.subtree_end(v);
    } else {
      out.push_back(v);
      ++v;
    }
  }
  return out;
}

std::vector<int> Blobs::frontier(const MultitypeTree& t, int x) const {
  std::vector<int> out;
  const int end = t.shape.subtree_end(x);
  for (int v = x + 1; v < end;) {
    if (t.type(v) == 0) {
      out.push_back(v);
      v = t.shape.subtree_end(v);
    } else {
      ++v;
    }
  }
  return out;
}

std::vector<int> Blobs::sizes() const {
  std::vector<int> size_of(owner.size(), 0);
  for (int o : owner) ++size_of[static_cast<std::size_t>(o)];
  std::vector<int> out;
  out.reserve(roots.size());
  for (int r : roots) out.push_back(size_of[static_cast<std::size_t>(r)]);
  return out;
}

Blobs blobs(const MultitypeTree& t) {
  require_root_type(t);
  Blobs b;
  b.owner.resize(static_cast<std::size_t>(t.size()));
  for (int v = 0; v < t.size(); ++v) {
    if (t.type(v) == 0) {
      b.owner[static_cast<std::size_t>(v)] = v;
      b.roots.push_back(v);
    } else {
      b.owner[static_cast<std::size_t>(v)] = b.owner[static_cast<std::size_t>(t.shape.parent(v))];
    }
  }
  return b;
}

PlaneTree reduce(const MultitypeTree& t) {
  const Blobs b = blobs(t);
  std::vector<int> rank(static_cast<std::size_t>(t.size()), -1);
  for (std::size_t r = 0; r < b.roots.size(); ++r) rank[static_cast<std::size_t>(b.roots[r])] = static_cast<int>(r);
  std::vector<int> parent(b.roots.size(), -1);
  for (std::size_t r = 1; r < b.roots.size(); ++r) {
    const int v = b.roots[r];
    parent[r] = rank[static_cast<std::size_t>(b.owner[static_cast<std::size_t>(t.shape.parent(v))])];
  }
  return PlaneTree::from_parents(std::move(parent));
}

Flattened flatten(const MultitypeTree& t) {
  const Blobs b = blobs(t);
  Flattened out;
  std::vector<int> parent;
  std::vector<int> types;
  parent.reserve(static_cast<std::size_t>(t.size()));
  types.reserve(static_cast<std::size_t>(t.size()));
  out.decoration.reserve(b.roots.size());
  // Stack of (original vertex, flat parent); type-0 vertices expand into
  // their flat children, others are leaves.
  std::vector<std::pair<int, int>> stack{{0, -1}};
  while (!stack.empty()) {
    const auto [v, p] = stack.back();
    stack.pop_back();
    const int idx = static_cast<int>(parent.size());
    parent.push_back(p);
    types.push_back(t.type(v));
    if (t.type(v) != 0) continue;
    out.decoration.push_back(blob_tree(t, v));
    const auto kids = flat_children(t, v);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.emplace_back(*it, idx);
  }
  out.flat = MultitypeTree(PlaneTree::from_parents(std::move(parent)), std::move(types));
  return out;
}

bool is_flat(const MultitypeTree& t) {
  for (int v = 0; v < t.size(); ++v) {
    if (t.type(v) != 0 && t.shape.outdegree(v) > 0) return false;
    const auto kids = t.shape.children(v);
    for (std::size_t i = 1; i < kids.size(); ++i)
      if (t.type(kids[i - 1]) > t.type(kids[i])) return false;
  }
  return t.type(0) == 0;
}

bool decoration_fits(const MultitypeTree& alpha, const std::vector<int>& child_counts) {
  if (alpha.type(0) != 0) return false;
  std::vector<int> counts(child_counts.size(), 0);
  for (int v = 1; v < alpha.size(); ++v) {
    const int ty = alpha.type(v);
    if (ty >= static_cast<int>(counts.size())) return false;
    if (ty == 0 && alpha.shape.outdegree(v) > 0) return false;
    ++counts[static_cast<std::size_t>(ty)];
  }
  return counts == child_counts;
}

BlowUp blow_up(const MultitypeTree& tau, const Decoration& alpha) {
  if (!is_flat(tau)) throw Error(ErrorKind::kDecorationMismatch, "tau is not a flat tree");
  int num_types = 1;
  for (int ty : tau.types) num_types = std::max(num_types, ty + 1);
  for (const auto& a : alpha)
    for (int ty : a.types) num_types = std::max(num_types, ty + 1);

  // Type-0 ranks and, per rank, the ranks of its type-0 children.
  std::vector<int> rank_of(static_cast<std::size_t>(tau.size()), -1);
  int ranks = 0;
  for (int v = 0; v < tau.size(); ++v)
    if (tau.type(v) == 0) rank_of[static_cast<std::size_t>(v)] = ranks++;
  if (static_cast<int>(alpha.size()) != ranks)
    throw Error(ErrorKind::kDecorationMismatch, "decoration count differs from number of type-1 vertices");
  std::vector<std::vector<int>> type0_children(static_cast<std::size_t>(ranks));
  for (int v = 0; v < tau.size(); ++v) {
    if (tau.type(v) != 0) continue;
    const int r = rank_of[static_cast<std::size_t>(v)];
    std::vector<int> counts(static_cast<std::size_t>(num_types), 0);
    for (int c : tau.shape.children(v)) {
      ++counts[static_cast<std::size_t>(tau.type(c))];
      if (tau.type(c) == 0) type0_children[static_cast<std::size_t>(r)].push_back(rank_of[static_cast<std::size_t>(c)]);
    }
    if (!decoration_fits(alpha[static_cast<std::size_t>(r)], counts))
      throw Error(ErrorKind::kDecorationMismatch,
                  "decoration of type-1 vertex " + std::to_string(v) + " does not match its children");
  }

  BlowUp out;
  out.phi.assign(static_cast<std::size_t>(ranks), -1);
  std::vector<int> parent;
  std::vector<int> types;
  parent.reserve(static_cast<std::size_t>(tau.size()));
  types.reserve(static_cast<std::size_t>(tau.size()));
  // Leaf slot numbering inside each alpha: the j-th type-0 leaf in DFS order.
  std::vector<std::vector<int>> leaf_slot(alpha.size());
  for (std::size_t r = 0; r < alpha.size(); ++r) {
    const auto& a = alpha[r];
    leaf_slot[r].assign(static_cast<std::size_t>(a.size()), -1);
    int j = 0;
    for (int u = 1; u < a.size(); ++u)
      if (a.type(u) == 0) leaf_slot[r][static_cast<std::size_t>(u)] = j++;
  }
  struct Item {
    int rank;
    int u;
    int parent;
  };
  std::vector<Item> stack{{0, 0, -1}};
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    const auto& a = alpha[static_cast<std::size_t>(it.rank)];
    if (it.u != 0 && a.type(it.u) == 0) {
      const int slot = leaf_slot[static_cast<std::size_t>(it.rank)][static_cast<std::size_t>(it.u)];
      stack.push_back({type0_children[static_cast<std::size_t>(it.rank)][static_cast<std::size_t>(slot)], 0, it.parent});
      continue;
    }
    const int idx = static_cast<int>(parent.size());
    parent.push_back(it.parent);
    types.push_back(a.type(it.u));
    if (it.u == 0) out.phi[static_cast<std::size_t>(it.rank)] = idx;
    const auto kids = a.shape.children(it.u);
    for (auto k = kids.rbegin(); k != kids.rend(); ++k) stack.push_back({it.rank, *k, idx});
  }
  out.tree = MultitypeTree(PlaneTree::from_parents(std::move(parent)), std::move(types));
  return out;
}

DegreeSequence degree_sequence(const MultitypeTree& t, int num_types) {
  DegreeSequence seq;
  seq.reserve(static_cast<std::size_t>(t.size()));
  for (int v = 0; v < t.size(); ++v) {
    DegreeEntry e{t.type(v), std::vector<int>(static_cast<std::size_t>(num_types), 0)};
    for (int c : t.shape.children(v)) ++e.counts.at(static_cast<std::size_t>(t.type(c)));
    seq.push_back(std::move(e));
  }
  std::sort(seq.begin(), seq.end());
  return seq;
}

bool admissible(const DegreeSequence& seq, int num_types) {
  if (seq.empty()) return false;
  std::vector<std::int64_t> balance(static_cast<std::size_t>(num_types), 0);
  balance[0] = 1;
  for (const auto& e : seq) {
    if (e.type < 0 || e.type >= num_types || static_cast<int>(e.counts.size()) != num_types) return false;
    --balance[static_cast<std::size_t>(e.type)];
    for (int j = 0; j < num_types; ++j) {
      if (e.counts[static_cast<std::size_t>(j)] < 0) return false;
      balance[static_cast<std::size_t>(j)] += e.counts[static_cast<std::size_t>(j)];
    }
  }
  return std::all_of(balance.begin(), balance.end(), [](std::int64_t x) { return x == 0; });
}

std::map<int, std::int64_t> n_d_counts(const PlaneTree& t) {
  std::map<int, std::int64_t> out;
  for (int v = 0; v < t.size(); ++v) ++out[t.outdegree(v)];
  return out;
}

std::map<int, std::int64_t> n_d_counts(const MultitypeTree& t) {
  std::map<int, std::int64_t> out;
  for (int v = 0; v < t.size(); ++v) {
    if (t.type(v) != 0) continue;
    int d = 0;
    for (int c : t.shape.children(v)) d += t.type(c) == 0;
    ++out[d];
  }
  return out;
}

int max_outdegree(const PlaneTree& t) {
  int m = 0;
  for (int v = 0; v < t.size(); ++v) m = std::max(m, t.outdegree(v));
  return m;
}

}  // namespace bienayme::tree
