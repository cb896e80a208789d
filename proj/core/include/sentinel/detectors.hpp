#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sentinel/graph.hpp"

namespace sentinel {

enum class DetectorId {
  TotalDegree,
  MaxDegree,
  DegreeVariance,
  Scan,
  Glr,
  CliqueNumber,
  DensestSubgraph,
  DensestAtLeast,
  RelaxedScan,
};

std::string_view detector_name(DetectorId id);
/// Accepts the snake_case names returned by detector_name.
DetectorId parse_detector(std::string_view name);
/// True for detectors that take a community size n.
bool detector_uses_size(DetectorId id);

struct DetectorResult {
  DetectorId detector_id = DetectorId::TotalDegree;
  double value = 0.0;
  std::optional<NodeSubset> witness;
  /// False when `value` is a bound: Greedy scan and Peel densest values are
  /// lower bounds, the relaxed scan value is an upper bound on SDP_n.
  bool exact = true;
  /// Relaxed scan only: certified lower bound on the sparse eigenvalue.
  std::optional<double> lower_bound;
};

void to_json(nlohmann::json& j, const DetectorResult& r);

enum class ScanMode { Exact, BranchBound, Greedy };
enum class DensestMode { ExactFlow, Peel };

std::string_view scan_mode_name(ScanMode m);
ScanMode parse_scan_mode(std::string_view name);
std::string_view densest_mode_name(DensestMode m);
DensestMode parse_densest_mode(std::string_view name);

struct SearchBudget {
  /// Exact scan: maximum number of subsets C(N, n) to enumerate.
  std::uint64_t enumeration = 100'000'000;
  /// Branch-and-bound searches (scan, clique): maximum search nodes.
  std::uint64_t nodes = 4'000'000'000ULL;

  friend bool operator==(const SearchBudget&, const SearchBudget&) = default;
};

// Moment-based statistics.
DetectorResult total_degree_stat(const Graph& g);
/// Witness is the smallest-index node of maximum degree.
DetectorResult max_degree_stat(const Graph& g);

struct DegreeVarianceParts {
  double p_hat;
  double v1;  // null-model variance estimate
  double v2;  // empirical degree spread
  double v;   // v2 - v1
  double v_star;
};
/// Throws DegenerateGraph for N < 3 or an edgeless graph.
DegreeVarianceParts degree_variance_parts(const Graph& g);
DetectorResult degree_variance_stat(const Graph& g);

// Combinatorial statistics. Witnesses are lexicographically smallest among
// optimal subsets.
DetectorResult scan_stat(const Graph& g, std::size_t n, ScanMode mode = ScanMode::BranchBound,
                         const SearchBudget& budget = {});
std::vector<DetectorResult> scan_all_sizes(const Graph& g, std::size_t n_min, std::size_t n_max,
                                           ScanMode mode = ScanMode::BranchBound,
                                           const SearchBudget& budget = {});

/// GLR objective of a subset of size n holding w_s internal edges.
double glr_objective(const Graph& g, std::size_t n, std::uint64_t w_s);
/// `mode` selects how the extreme subset edge counts are found (Greedy is
/// rejected: the GLR maximum needs both exact extremes).
DetectorResult glr_stat(const Graph& g, std::size_t n, ScanMode mode = ScanMode::BranchBound,
                        const SearchBudget& budget = {});

DetectorResult clique_number(const Graph& g, const SearchBudget& budget = {});
/// True when `s` induces a complete subgraph.
bool is_clique(const Graph& g, const NodeSubset& s);

/// Throws EmptyGraph when the graph has no edges. The ExactFlow witness is the
/// union of all densest subsets, itself densest.
DetectorResult densest_subgraph(const Graph& g, DensestMode mode = DensestMode::ExactFlow);
/// Peeling lower bound on max_{|S| >= n} |E_S| / |S|.
DetectorResult densest_at_least(const Graph& g, std::size_t n);

/// Dense symmetric matrix; built from W^2 or supplied directly.
class SquaredAdjacency {
 public:
  SquaredAdjacency() = default;
  /// Row-major N x N values; throws DomainError unless symmetric.
  static SquaredAdjacency from_dense(std::size_t n, std::vector<double> values);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return v_[i * n_ + j]; }
  const std::vector<double>& values() const noexcept { return v_; }
  bool nonnegative() const noexcept { return nonnegative_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> v_;
  bool nonnegative_ = true;
};

/// B = W^2: B_ii = degree(i), B_ij = number of common neighbours.
SquaredAdjacency squared_adjacency(const Graph& g);

/// Largest eigenvalue of a symmetric matrix, within 1e-8 relative. Values
/// from the iterative path are nudged up by the residual norm.
double lambda_max(const SquaredAdjacency& b);

struct SparseEigenBound {
  double value;
  NodeSubset support;
  bool exact;
};
/// Lower bound on max_{|S| = n} lambda_max(B_S): enumerated for N <= 14,
/// truncated power iteration otherwise.
SparseEigenBound sparse_eig_lower(const SquaredAdjacency& b, std::size_t n);

/// lambda_max(tau_z(B)) + n z, an upper bound on SDP_n(B) for any z >= 0.
double sdp_dual_bound(const SquaredAdjacency& b, std::size_t n, double z);

/// Candidate thresholds used by the relaxed scan: 0 plus the distinct entry
/// magnitudes, thinned to at most 256 quantile-spaced values.
std::vector<double> relaxed_scan_grid(const SquaredAdjacency& b);

struct RelaxedScanOptions {
  bool with_lower_bound = true;
};
/// value = min over relaxed_scan_grid of sdp_dual_bound(W^2, n, z).
DetectorResult relaxed_scan_stat(const Graph& g, std::size_t n, const RelaxedScanOptions& opt = {});

/// Parameters shared by all detectors; fields unused by a detector are ignored.
struct DetectorParams {
  std::size_t n = 0;
  ScanMode scan_mode = ScanMode::BranchBound;
  DensestMode densest_mode = DensestMode::ExactFlow;
  SearchBudget budget{};
  bool relaxed_lower_bound = false;

  friend bool operator==(const DetectorParams&, const DetectorParams&) = default;
};

void to_json(nlohmann::json& j, const DetectorParams& p);
void from_json(const nlohmann::json& j, DetectorParams& p);

DetectorResult evaluate(DetectorId id, const DetectorParams& params, const Graph& g);

/// Recomputes the statistic on `witness` alone; used to check witness
/// consistency. Returns nullopt for detectors without witnesses.
std::optional<double> evaluate_witness(DetectorId id, const DetectorParams& params, const Graph& g,
                                       const NodeSubset& witness);

}  // namespace sentinel
