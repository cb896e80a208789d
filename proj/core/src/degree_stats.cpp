// Degree-based statistics: total degree, maximum degree, degree variance.

#include <algorithm>
#include <cmath>

#include "sentinel/detectors.hpp"
#include "sentinel/error.hpp"

namespace sentinel {

DetectorResult total_degree_stat(const Graph& g) {
  DetectorResult r;
  r.detector_id = DetectorId::TotalDegree;
  r.value = static_cast<double>(g.total_edges());
  return r;
}

DetectorResult max_degree_stat(const Graph& g) {
  const auto deg = g.degrees();
  const auto it = std::max_element(deg.begin(), deg.end());
  DetectorResult r;
  r.detector_id = DetectorId::MaxDegree;
  r.value = static_cast<double>(*it);
  r.witness = NodeSubset{static_cast<Node>(it - deg.begin())};
  return r;
}

DegreeVarianceParts degree_variance_parts(const Graph& g) {
  const std::size_t N = g.num_nodes();
  require(N >= 3, ErrorKind::DegenerateGraph, "degree variance needs N >= 3");
  require(g.total_edges() > 0, ErrorKind::DegenerateGraph, "degree variance needs at least one edge");
  const double n = static_cast<double>(N);
  const double pairs = n * (n - 1.0) / 2.0;
  DegreeVarianceParts p{};
  p.p_hat = static_cast<double>(g.total_edges()) / pairs;
  p.v1 = (n - 1.0) * pairs / (pairs - 1.0) * p.p_hat * (1.0 - p.p_hat);
  const double centre = (n - 1.0) * p.p_hat;
  double ss = 0.0;
  for (auto d : g.degrees()) {
    const double e = static_cast<double>(d) - centre;
    ss += e * e;
  }
  p.v2 = ss / (n - 2.0);
  p.v = p.v2 - p.v1;
  p.v_star = p.v / (std::sqrt(n) * p.p_hat);
  return p;
}

DetectorResult degree_variance_stat(const Graph& g) {
  DetectorResult r;
  r.detector_id = DetectorId::DegreeVariance;
  r.value = degree_variance_parts(g).v_star;
  return r;
}

}  // namespace sentinel
