#include "bienayme/tree/io.hpp"

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>

#include "bienayme/errors.hpp"

namespace bienayme::tree {

namespace {

std::vector<int> parse_csv(const std::string& s) {
  std::vector<int> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::kInvalidArgument, "bad integer '" + item + "' in tree text");
    }
  }
  return out;
}

void put_u32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

bool get_u32(std::istream& in, std::uint32_t& v) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) return false;
  v = static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
      (static_cast<std::uint32_t>(bytes[2]) << 16) | (static_cast<std::uint32_t>(bytes[3]) << 24);
  return true;
}

}  // namespace

std::string to_text(const MultitypeTree& t) {
  std::string s = "types:";
  for (int v = 0; v < t.size(); ++v) {
    if (v > 0) s += ',';
    s += std::to_string(t.type(v) + 1);
  }
  s += " parents:";
  for (int v = 1; v < t.size(); ++v) {
    if (v > 1) s += ',';
    s += std::to_string(t.shape.parent(v));
  }
  return s;
}

MultitypeTree from_text(const std::string& line) {
  const auto tp = line.find("types:");
  const auto pp = line.find(" parents:");
  if (tp != 0 || pp == std::string::npos)
    throw Error(ErrorKind::kInvalidArgument, "tree text must read 'types:<csv> parents:<csv>'");
  auto types = parse_csv(line.substr(6, pp - 6));
  auto tail = parse_csv(line.substr(pp + 9));
  if (types.empty() || tail.size() + 1 != types.size())
    throw Error(ErrorKind::kInvalidArgument, "tree text has inconsistent lengths");
  for (int& ty : types) {
    if (ty < 1) throw Error(ErrorKind::kInvalidArgument, "tree text types are 1-based");
    --ty;
  }
  std::vector<int> parent{-1};
  parent.insert(parent.end(), tail.begin(), tail.end());
  return MultitypeTree(PlaneTree::from_parents(std::move(parent)), std::move(types));
}

void write_binary(std::ostream& out, const MultitypeTree& t) {
  put_u32(out, static_cast<std::uint32_t>(t.size()));
  for (int v = 1; v < t.size(); ++v) put_u32(out, static_cast<std::uint32_t>(t.shape.parent(v)));
  for (int v = 0; v < t.size(); ++v) put_u32(out, static_cast<std::uint32_t>(t.type(v)));
}

std::optional<MultitypeTree> read_binary(std::istream& in) {
  std::uint32_t n = 0;
  if (!get_u32(in, n)) return std::nullopt;
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "binary tree record with zero vertices");
  std::vector<int> parent{-1};
  std::vector<int> types;
  std::uint32_t x = 0;
  for (std::uint32_t v = 1; v < n; ++v) {
    if (!get_u32(in, x)) throw Error(ErrorKind::kInvalidArgument, "truncated binary tree record");
    parent.push_back(static_cast<int>(x));
  }
  for (std::uint32_t v = 0; v < n; ++v) {
    if (!get_u32(in, x)) throw Error(ErrorKind::kInvalidArgument, "truncated binary tree record");
    types.push_back(static_cast<int>(x));
  }
  return MultitypeTree(PlaneTree::from_parents(std::move(parent)), std::move(types));
}

void write_series_csv(std::ostream& out, const std::vector<int>& values) {
  out << "step,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) out << i << ',' << values[i] << '\n';
}

}  // namespace bienayme::tree
