// Detector names, JSON forms and dispatch.

#include <array>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "sentinel/detectors.hpp"
#include "sentinel/error.hpp"

namespace sentinel {
namespace {

constexpr std::array<std::pair<DetectorId, std::string_view>, 9> kDetectorNames{{
    {DetectorId::TotalDegree, "total_degree"},
    {DetectorId::MaxDegree, "max_degree"},
    {DetectorId::DegreeVariance, "degree_variance"},
    {DetectorId::Scan, "scan"},
    {DetectorId::Glr, "glr"},
    {DetectorId::CliqueNumber, "clique_number"},
    {DetectorId::DensestSubgraph, "densest_subgraph"},
    {DetectorId::DensestAtLeast, "densest_at_least"},
    {DetectorId::RelaxedScan, "relaxed_scan"},
}};

constexpr std::array<std::pair<ScanMode, std::string_view>, 3> kScanModes{{
    {ScanMode::Exact, "exact"},
    {ScanMode::BranchBound, "branch_bound"},
    {ScanMode::Greedy, "greedy"},
}};

constexpr std::array<std::pair<DensestMode, std::string_view>, 2> kDensestModes{{
    {DensestMode::ExactFlow, "exact_flow"},
    {DensestMode::Peel, "peel"},
}};

template <class E, std::size_t K>
std::string_view lookup(const std::array<std::pair<E, std::string_view>, K>& table, E e) {
  for (const auto& [k, v] : table)
    if (k == e) return v;
  return "?";
}

template <class E, std::size_t K>
E lookup(const std::array<std::pair<E, std::string_view>, K>& table, std::string_view name,
         const char* what) {
  for (const auto& [k, v] : table)
    if (v == name) return k;
  std::string known;
  for (const auto& [k, v] : table) known += (known.empty() ? "" : ", ") + std::string(v);
  fail(ErrorKind::InvalidSpec, "unknown " + std::string(what) + " '" + std::string(name) + "' (expected one of " +
                                   known + ")");
}

// Integral values serialize as JSON integers.
nlohmann::json number(double v) {
  if (std::isfinite(v) && v == std::trunc(v) && std::abs(v) < 9.0e15) return static_cast<std::int64_t>(v);
  return v;
}

}  // namespace

std::string_view detector_name(DetectorId id) { return lookup(kDetectorNames, id); }
DetectorId parse_detector(std::string_view name) { return lookup(kDetectorNames, name, "detector"); }
std::string_view scan_mode_name(ScanMode m) { return lookup(kScanModes, m); }
ScanMode parse_scan_mode(std::string_view name) { return lookup(kScanModes, name, "scan mode"); }
std::string_view densest_mode_name(DensestMode m) { return lookup(kDensestModes, m); }
DensestMode parse_densest_mode(std::string_view name) { return lookup(kDensestModes, name, "densest mode"); }

bool detector_uses_size(DetectorId id) {
  return id == DetectorId::Scan || id == DetectorId::Glr || id == DetectorId::DensestAtLeast ||
         id == DetectorId::RelaxedScan;
}

void to_json(nlohmann::json& j, const DetectorResult& r) {
  j = nlohmann::json::object();
  j["detector_id"] = detector_name(r.detector_id);
  j["value"] = number(r.value);
  if (r.witness) {
    auto w = nlohmann::json::array();
    for (Node v : *r.witness) w.push_back(v);
    j["witness"] = std::move(w);
  } else {
    j["witness"] = nullptr;
  }
  j["exact"] = r.exact;
  if (r.lower_bound) j["lower_bound"] = number(*r.lower_bound);
}

void to_json(nlohmann::json& j, const DetectorParams& p) {
  j = nlohmann::json{{"n", p.n},
                     {"scan_mode", scan_mode_name(p.scan_mode)},
                     {"densest_mode", densest_mode_name(p.densest_mode)},
                     {"budget", {{"enumeration", p.budget.enumeration}, {"nodes", p.budget.nodes}}},
                     {"relaxed_lower_bound", p.relaxed_lower_bound}};
}

void from_json(const nlohmann::json& j, DetectorParams& p) {
  require(j.is_object(), ErrorKind::InvalidSpec, "detector params must be a JSON object");
  p = DetectorParams{};
  for (const auto& [key, val] : j.items()) {
    if (key == "n") {
      p.n = val.get<std::size_t>();
    } else if (key == "scan_mode") {
      p.scan_mode = parse_scan_mode(val.get<std::string>());
    } else if (key == "densest_mode") {
      p.densest_mode = parse_densest_mode(val.get<std::string>());
    } else if (key == "relaxed_lower_bound") {
      p.relaxed_lower_bound = val.get<bool>();
    } else if (key == "budget") {
      for (const auto& [bk, bv] : val.items()) {
        if (bk == "enumeration")
          p.budget.enumeration = bv.get<std::uint64_t>();
        else if (bk == "nodes")
          p.budget.nodes = bv.get<std::uint64_t>();
        else
          fail(ErrorKind::InvalidSpec, "unknown budget key '" + bk + "'");
      }
    } else {
      fail(ErrorKind::InvalidSpec, "unknown detector parameter '" + key + "'");
    }
  }
}

DetectorResult evaluate(DetectorId id, const DetectorParams& p, const Graph& g) {
  switch (id) {
    case DetectorId::TotalDegree:
      return total_degree_stat(g);
    case DetectorId::MaxDegree:
      return max_degree_stat(g);
    case DetectorId::DegreeVariance:
      return degree_variance_stat(g);
    case DetectorId::Scan:
      return scan_stat(g, p.n, p.scan_mode, p.budget);
    case DetectorId::Glr:
      return glr_stat(g, p.n, p.scan_mode, p.budget);
    case DetectorId::CliqueNumber:
      return clique_number(g, p.budget);
    case DetectorId::DensestSubgraph:
      return densest_subgraph(g, p.densest_mode);
    case DetectorId::DensestAtLeast:
      return densest_at_least(g, p.n);
    case DetectorId::RelaxedScan:
      return relaxed_scan_stat(g, p.n, RelaxedScanOptions{p.relaxed_lower_bound});
  }
  fail(ErrorKind::DomainError, "unknown detector");
}

std::optional<double> evaluate_witness(DetectorId id, const DetectorParams& p, const Graph& g,
                                       const NodeSubset& witness) {
  if (witness.empty()) return std::nullopt;
  const auto density = [&] {
    return static_cast<double>(g.subgraph_edges(witness)) / static_cast<double>(witness.size());
  };
  switch (id) {
    case DetectorId::MaxDegree:
      return static_cast<double>(g.degree(witness[0]));
    case DetectorId::Scan:
      return static_cast<double>(g.subgraph_edges(witness));
    case DetectorId::Glr:
      return glr_objective(g, p.n, g.subgraph_edges(witness));
    case DetectorId::CliqueNumber:
      return is_clique(g, witness) ? static_cast<double>(witness.size()) : 0.0;
    case DetectorId::DensestSubgraph:
    case DetectorId::DensestAtLeast:
      return density();
    default:
      return std::nullopt;
  }
}

}  // namespace sentinel
