#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bienayme/tree/plane_tree.hpp"

namespace bienayme::tree {

// "types:<csv> parents:<csv>" with 1-based types and the parents of vertices
// 1..n-1.
std::string to_text(const MultitypeTree& t);
MultitypeTree from_text(const std::string& line);

// Little-endian u32 records: n, parents[1..n-1], types[0..n-1] (0-based).
void write_binary(std::ostream& out, const MultitypeTree& t);
std::optional<MultitypeTree> read_binary(std::istream& in);

// Columns step,value.
void write_series_csv(std::ostream& out, const std::vector<int>& values);

}  // namespace bienayme::tree
