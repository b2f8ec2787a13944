#include "bienayme/sampler/degree_sequence.hpp"

#include <algorithm>

#include "bienayme/errors.hpp"

namespace bienayme::sampler {

std::size_t cycle_lemma_rotation(std::span<const int> outdegrees) {
  if (outdegrees.empty()) throw Error(ErrorKind::kInadmissible, "empty degree list");
  std::int64_t sum = 0;
  std::int64_t min_sum = 0;
  std::size_t argmin = 0;
  for (std::size_t i = 0; i < outdegrees.size(); ++i) {
    if (outdegrees[i] < 0) throw Error(ErrorKind::kInadmissible, "negative outdegree");
    sum += outdegrees[i] - 1;
    if (i == 0 || sum < min_sum) {
      min_sum = sum;
      argmin = i;
    }
  }
  if (sum != -1) throw Error(ErrorKind::kInadmissible, "outdegrees must sum to (number of vertices) - 1");
  // The walk first reaches its overall minimum at argmin; starting right
  // after it keeps every earlier partial sum above the final value -1.
  return (argmin + 1) % outdegrees.size();
}

void rotate_to_tree(std::vector<int>& outdegrees) {
  const auto r = cycle_lemma_rotation(outdegrees);
  std::rotate(outdegrees.begin(), outdegrees.begin() + static_cast<std::ptrdiff_t>(r), outdegrees.end());
}

tree::PlaneTree sample_degree_sequence_tree(std::vector<int> outdegrees, RngStream& rng) {
  std::shuffle(outdegrees.begin(), outdegrees.end(), rng.engine());
  rotate_to_tree(outdegrees);
  return tree::PlaneTree::from_outdegrees(outdegrees);
}

}  // namespace bienayme::sampler
