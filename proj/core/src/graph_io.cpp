#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "sentinel/error.hpp"
#include "sentinel/graph.hpp"

namespace sentinel {
namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  fail(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + what);
}

// Splits "a b" into two unsigned decimal fields separated by one space.
bool split_pair(std::string_view s, std::uint64_t& a, std::uint64_t& b) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  const auto sp = s.find(' ');
  if (sp == std::string_view::npos || sp == 0 || sp + 1 >= s.size()) return false;
  auto parse = [](std::string_view t, std::uint64_t& v) {
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    return ec == std::errc{} && p == t.data() + t.size();
  };
  return parse(s.substr(0, sp), a) && parse(s.substr(sp + 1), b);
}

}  // namespace

Graph parse_graph(std::istream& in, ReadReport* report) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) parse_fail(line_no, "missing header");
  std::uint64_t n = 0, m = 0;
  if (!split_pair(line, n, m)) parse_fail(line_no, "expected header \"N M\"");
  if (n == 0) parse_fail(line_no, "N must be positive");

  GraphBuilder b(n);
  ReadReport local;
  for (std::uint64_t k = 0; k < m; ++k) {
    ++line_no;
    if (!std::getline(in, line)) parse_fail(line_no, "expected " + std::to_string(m) + " edge lines");
    std::uint64_t i = 0, j = 0;
    if (!split_pair(line, i, j)) parse_fail(line_no, "expected \"i j\"");
    if (i >= n || j >= n) parse_fail(line_no, "index out of range [0," + std::to_string(n) + ")");
    if (i >= j) parse_fail(line_no, "expected i < j");
    if (!b.add_edge_unchecked(static_cast<Node>(i), static_cast<Node>(j))) ++local.duplicate_lines;
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line != "\r") parse_fail(line_no, "trailing content after edge list");
  }
  if (report) *report = local;
  return std::move(b).build();
}

void format_graph(const Graph& g, std::ostream& out) {
  out << g.num_nodes() << ' ' << g.total_edges() << '\n';
  for (auto [i, j] : g.edge_list()) out << i << ' ' << j << '\n';
}

Graph read_graph(const std::filesystem::path& path, ReadReport* report) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path.string());
  return parse_graph(in, report);
}

void write_graph(const Graph& g, const std::filesystem::path& path) {
  std::ostringstream buf;
  format_graph(g, buf);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::IoError, "cannot write " + path.string());
  out << buf.str();
  if (!out) fail(ErrorKind::IoError, "write failed for " + path.string());
}

}  // namespace sentinel
