// Finite-size evaluation of the detection-boundary conditions.

#include <cmath>
#include <limits>
#include <string>

#include <nlohmann/json.hpp>

#include "sentinel/error.hpp"
#include "sentinel/harness.hpp"
#include "sentinel/kernels.hpp"

namespace sentinel {

std::string_view knowledge_name(Knowledge k) { return k == Knowledge::KnownP0 ? "known" : "unknown"; }

Knowledge parse_knowledge(std::string_view name) {
  if (name == "known") return Knowledge::KnownP0;
  if (name == "unknown") return Knowledge::UnknownP0;
  fail(ErrorKind::InvalidSpec, "unknown knowledge '" + std::string(name) + "' (expected known or unknown)");
}

std::string_view regime_name(RegimeLabel r) {
  switch (r) {
    case RegimeLabel::Undetectable:
      return "Undetectable";
    case RegimeLabel::ScanRegime:
      return "ScanRegime";
    case RegimeLabel::TotalDegreeRegime:
      return "TotalDegreeRegime";
    case RegimeLabel::DegreeVarianceRegime:
      return "DegreeVarianceRegime";
    case RegimeLabel::CliqueRegime:
      return "CliqueRegime";
    case RegimeLabel::RelaxedScanRegime:
      return "RelaxedScanRegime";
  }
  return "?";
}

void to_json(nlohmann::json& j, const RegimeReport& r) {
  auto preds = nlohmann::json::object();
  for (const auto& p : r.predicates)
    preds[p.name] = {{"value", p.value}, {"threshold", p.threshold}, {"holds", p.holds}};
  j = nlohmann::json{{"label", regime_name(r.label)},
                     {"poly_label", regime_name(r.poly_label)},
                     {"column", r.column},
                     {"row", r.row},
                     {"cell_ratio", r.cell_ratio},
                     {"cell_threshold", r.cell_threshold},
                     {"predicates", std::move(preds)}};
  j["n_p0_holds"] = r.n_p0_holds ? nlohmann::json(*r.n_p0_holds) : nlohmann::json(nullptr);
  j["n_log_holds"] = r.n_log_holds ? nlohmann::json(*r.n_log_holds) : nlohmann::json(nullptr);
}

RegimeReport classify_regime(std::size_t N, std::size_t n, double p0, double p1, Knowledge knowledge,
                             bool constraints_check, double n_p0_threshold) {
  require(n >= 1 && n < N, ErrorKind::DomainError, "need 1 <= n < N");
  require(p0 > 0.0 && p0 < 1.0, ErrorKind::DomainError, "need 0 < p0 < 1");
  require(p1 >= p0 && p1 <= 1.0, ErrorKind::DomainError, "need p0 <= p1 <= 1");

  const double Nd = static_cast<double>(N);
  const double nd = static_cast<double>(n);
  const double log_N = std::log(Nd);
  const double log_Nn = std::log(Nd / nd);
  const double gap = p1 - p0;
  const double var0 = p0 * (1.0 - p0);
  const double R = snr(n, p0, p1);
  const bool known = knowledge == Knowledge::KnownP0;

  RegimeReport rep;
  auto add = [&](std::string name, double value, double threshold, bool above) {
    rep.predicates.push_back({std::move(name), value, threshold, above ? value > threshold : value < threshold});
  };

  const double lower1 = known ? gap / std::sqrt(p0) * nd * nd / Nd
                              : gap / std::sqrt(p0) * std::pow(nd, 1.5) / std::pow(Nd, 0.75);
  const double entropy = nd * bern_entropy(p0, p1) / (2.0 * log_Nn);
  const double lower2a = gap * gap / (4.0 * var0) * nd / log_Nn;
  const double lower2b = p1 / (2.0 * (1.0 - p0)) * nd / log_Nn * std::log(log_Nn / (nd * p0));
  const double clique_log = log_binomial(N, n) + static_cast<double>(half_pair(n)) * std::log(p0);

  add("lower1", lower1, 1.0, false);
  add("lower2", entropy, 1.0, false);
  add("lower2a", lower2a, 1.0, false);
  add("lower2b", lower2b, 1.0, false);
  add("total", gap / std::sqrt(p0) * nd * nd / Nd, 1.0, true);
  add("scan", entropy, 1.0, true);
  add("degree_variance", gap * gap / p0 * nd * nd * nd / std::pow(Nd, 1.5), 1.0, true);
  const double relaxed = nd / std::sqrt(Nd * log_N) * gap * gap / p0;
  add("relaxed", relaxed, 2.0, true);
  add("max", nd * nd / (Nd * log_N) * gap * gap / var0, 2.0, true);
  add("densest", nd * p1 / (Nd * p0), 1.0, true);
  add("clique_log", clique_log, 0.0, false);
  add("clique1", std::exp(clique_log), 1.0, true);
  add("clique2", std::exp(clique_log), 1.0, false);
  add("snr", R, 0.0, true);

  // Table columns split at N^{2/3} (p0 known) or N^{3/4} (p0 unknown); rows
  // split at n p0 = log(N/n).
  const double exponent = std::log(nd) / log_N;
  const bool small_n = exponent < (known ? 2.0 / 3.0 : 3.0 / 4.0);
  const bool dense = nd * p0 > log_Nn;
  rep.column = small_n ? "small_n" : "large_n";
  rep.row = dense ? "dense" : "sparse";
  rep.cell_ratio = R;
  RegimeLabel cell_label;
  if (small_n) {
    if (dense) {
      rep.cell_threshold = 2.0 * std::sqrt(log_Nn);
    } else {
      const double inner = std::log(log_Nn / (nd * p0));
      rep.cell_threshold = inner > 0.0 ? 2.0 * log_Nn / (std::sqrt(nd * p0) * inner)
                                       : std::numeric_limits<double>::infinity();
    }
    cell_label = RegimeLabel::ScanRegime;
  } else {
    rep.cell_threshold = known ? Nd / std::pow(nd, 1.5) : std::pow(Nd, 0.75) / nd;
    cell_label = known ? RegimeLabel::TotalDegreeRegime : RegimeLabel::DegreeVarianceRegime;
  }

  if (p1 == 1.0)
    rep.label = clique_log < 0.0 ? RegimeLabel::CliqueRegime : RegimeLabel::Undetectable;
  else
    rep.label = R > rep.cell_threshold ? cell_label : RegimeLabel::Undetectable;

  if (exponent < 0.5) {
    rep.poly_label = relaxed > 2.0 ? RegimeLabel::RelaxedScanRegime : RegimeLabel::Undetectable;
  } else if (known) {
    rep.poly_label = R > Nd / std::pow(nd, 1.5) ? RegimeLabel::TotalDegreeRegime : RegimeLabel::Undetectable;
  } else {
    rep.poly_label = R > std::pow(Nd, 0.75) / nd ? RegimeLabel::DegreeVarianceRegime : RegimeLabel::Undetectable;
  }

  if (constraints_check) {
    const double np0_ratio = std::log(std::max(1.0, 1.0 / (nd * p0))) / log_Nn;
    add("n_p0", np0_ratio, n_p0_threshold, false);
    add("n_log", nd / log_N, 1.0, true);
    rep.n_p0_holds = rep.predicates[rep.predicates.size() - 2].holds;
    rep.n_log_holds = rep.predicates.back().holds;
  }
  return rep;
}

}  // namespace sentinel
