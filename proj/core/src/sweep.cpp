// Grid sweeps over (N, n, p0, p1) with JSON-lines checkpoints.

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "sentinel/error.hpp"
#include "sentinel/harness.hpp"

namespace sentinel {
namespace {

constexpr std::uint64_t kRiskTag = 0x215C;
constexpr const char* kCheckpointFile = "checkpoint.jsonl";

nlohmann::json cell_json(const SweepCell& c) {
  return nlohmann::json{{"N", c.N}, {"n", c.n}, {"p0", c.p0}, {"p1", c.p1}, {"model", variant_name(c.model)}};
}

SweepCell cell_from_json(const nlohmann::json& j) {
  SweepCell c;
  for (const auto& [key, val] : j.items()) {
    if (key == "N")
      c.N = val.get<std::size_t>();
    else if (key == "n")
      c.n = val.get<std::size_t>();
    else if (key == "p0")
      c.p0 = val.get<double>();
    else if (key == "p1")
      c.p1 = val.get<double>();
    else if (key == "model")
      c.model = parse_variant(val.get<std::string>());
    else
      fail(ErrorKind::InvalidSpec, "unknown sweep cell key '" + key + "'");
  }
  require(c.model != ModelVariant::Null, ErrorKind::InvalidSpec, "sweep cells need a planted model");
  return c;
}

ModelSpec alternative(const SweepCell& c) {
  return c.model == ModelVariant::PlantedFixedDegree ? ModelSpec::fixed_degree(c.N, c.p0, c.n, c.p1)
                                                     : ModelSpec::planted(c.N, c.p0, c.n, c.p1);
}

using Key = std::tuple<std::uint64_t, std::string, std::uint64_t>;

std::uint64_t row_seed(const SweepConfig& config, const SweepCell& cell, DetectorId id) {
  return derive_seed(derive_seed(config.seed, cell_hash(cell)), static_cast<std::uint64_t>(id));
}

SweepRow run_cell(const SweepConfig& config, const SweepCell& cell, DetectorId id, const RunOptions& run) {
  SweepRow row;
  row.cell = cell;
  row.detector = id;
  row.alpha = config.alpha;
  row.replicates = config.replicates;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Knowledge k =
        cell.model == ModelVariant::PlantedFixedDegree ? Knowledge::UnknownP0 : Knowledge::KnownP0;
    row.regime = regime_name(classify_regime(cell.N, cell.n, cell.p0, cell.p1, k, false).label);
  } catch (const Error&) {
    row.regime = "";
  }
  try {
    const ModelSpec alt = alternative(cell);
    alt.validate();
    const ModelSpec null = matched_null(alt);
    DetectorParams params = config.params;
    params.n = cell.n;
    const std::uint64_t seed = row_seed(config, cell, id);
    const CalibratedTest test =
        calibrate(id, params, null, config.alpha, config.calibration_replicates, seed,
                  CalibrationMethod::MonteCarloKnownP0, run);
    row.risk = estimate_risk(test, null, alt, config.replicates, derive_seed(seed, kRiskTag), run);
  } catch (const Error& e) {
    row.error = e.what();
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

}  // namespace

std::uint64_t cell_hash(const SweepCell& c) {
  const std::string text = cell_json(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void to_json(nlohmann::json& j, const SweepConfig& c) {
  auto cells = nlohmann::json::array();
  for (const auto& cell : c.cells) cells.push_back(cell_json(cell));
  auto detectors = nlohmann::json::array();
  for (auto d : c.detectors) detectors.push_back(detector_name(d));
  j = nlohmann::json{{"cells", std::move(cells)},
                     {"detectors", std::move(detectors)},
                     {"params", c.params},
                     {"alpha", c.alpha},
                     {"calibration_replicates", c.calibration_replicates},
                     {"replicates", c.replicates},
                     {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, SweepConfig& c) {
  require(j.is_object(), ErrorKind::InvalidSpec, "sweep config must be a JSON object");
  c = SweepConfig{};
  for (const auto& [key, val] : j.items()) {
    if (key == "cells") {
      for (const auto& cell : val) c.cells.push_back(cell_from_json(cell));
    } else if (key == "detectors") {
      for (const auto& d : val) c.detectors.push_back(parse_detector(d.get<std::string>()));
    } else if (key == "params") {
      c.params = val.get<DetectorParams>();
    } else if (key == "alpha") {
      c.alpha = val.get<double>();
    } else if (key == "calibration_replicates") {
      c.calibration_replicates = val.get<std::size_t>();
    } else if (key == "replicates") {
      c.replicates = val.get<std::size_t>();
    } else if (key == "seed") {
      c.seed = val.get<std::uint64_t>();
    } else {
      fail(ErrorKind::InvalidSpec, "unknown sweep config key '" + key + "'");
    }
  }
}

void to_json(nlohmann::json& j, const SweepRow& r) {
  j = nlohmann::json{{"cell", cell_json(r.cell)},
                     {"detector", detector_name(r.detector)},
                     {"alpha", r.alpha},
                     {"replicates", r.replicates},
                     {"regime", r.regime},
                     {"seconds", r.seconds},
                     {"error", r.error}};
  j["risk"] = r.risk ? nlohmann::json(*r.risk) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, SweepRow& r) {
  r.cell = cell_from_json(j.at("cell"));
  r.detector = parse_detector(j.at("detector").get<std::string>());
  r.alpha = j.at("alpha").get<double>();
  r.replicates = j.at("replicates").get<std::size_t>();
  r.regime = j.at("regime").get<std::string>();
  r.seconds = j.at("seconds").get<double>();
  r.error = j.at("error").get<std::string>();
  if (j.at("risk").is_null())
    r.risk.reset();
  else
    r.risk = j.at("risk").get<RiskReport>();
}

std::vector<SweepRow> phase_sweep(const SweepConfig& config, const std::optional<std::filesystem::path>& checkpoint_dir,
                                  const RunOptions& run, const std::function<void(const SweepRow&)>& progress) {
  require(!config.cells.empty(), ErrorKind::InvalidSpec, "sweep grid is empty");
  require(!config.detectors.empty(), ErrorKind::InvalidSpec, "sweep has no detectors");

  // Rows are reused only when every setting that shapes them matches.
  const nlohmann::json settings{{"alpha", config.alpha},
                                {"calibration_replicates", config.calibration_replicates},
                                {"replicates", config.replicates},
                                {"params", config.params}};
  std::map<Key, SweepRow> done;
  std::ofstream log;
  if (checkpoint_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*checkpoint_dir, ec);
    require(!ec, ErrorKind::IoError, "cannot create checkpoint directory " + checkpoint_dir->string());
    const auto path = *checkpoint_dir / kCheckpointFile;
    if (std::ifstream in(path); in) {
      std::string line;
      while (std::getline(in, line)) {
        // A run killed mid-write leaves at most one torn final line.
        const auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("key") || !j.contains("row")) continue;
        if (j.value("settings", nlohmann::json()) != settings) continue;
        const auto& k = j["key"];
        done[{k.at("cell_hash").get<std::uint64_t>(), k.at("detector").get<std::string>(),
              k.at("seed").get<std::uint64_t>()}] = j["row"].get<SweepRow>();
      }
    }
    log.open(path, std::ios::app);
    require(static_cast<bool>(log), ErrorKind::IoError, "cannot write checkpoint " + path.string());
  }

  std::vector<SweepRow> rows;
  rows.reserve(config.cells.size() * config.detectors.size());
  for (const auto& cell : config.cells) {
    for (DetectorId id : config.detectors) {
      const Key key{cell_hash(cell), std::string(detector_name(id)), config.seed};
      if (auto it = done.find(key); it != done.end()) {
        rows.push_back(it->second);
      } else {
        rows.push_back(run_cell(config, cell, id, run));
        if (log) {
          nlohmann::json line{{"key", {{"cell_hash", std::get<0>(key)}, {"detector", std::get<1>(key)},
                                       {"seed", std::get<2>(key)}}},
                              {"settings", settings},
                              {"row", rows.back()}};
          log << line.dump() << '\n' << std::flush;
        }
      }
      if (progress) progress(rows.back());
    }
  }
  return rows;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == std::trunc(v) && std::abs(v) < 9.0e15) return std::to_string(static_cast<std::int64_t>(v));
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string risk_csv_header() {
  return "N,n,p0,p1,model,detector,alpha,replicates,type1,type2,gamma,ci_half,regime,seconds";
}

std::string risk_csv_row(const SweepRow& row, bool with_seconds) {
  std::ostringstream out;
  out << row.cell.N << ',' << row.cell.n << ',' << format_number(row.cell.p0) << ',' << format_number(row.cell.p1)
      << ',' << variant_name(row.cell.model) << ',' << detector_name(row.detector) << ','
      << format_number(row.alpha) << ',' << row.replicates << ',';
  if (row.risk) {
    out << format_number(row.risk->type1_hat) << ',' << format_number(row.risk->type2_hat) << ','
        << format_number(row.risk->gamma_hat) << ',' << format_number(row.risk->half_width);
  } else {
    out << ",,,";
  }
  out << ',' << row.regime << ',';
  if (with_seconds) out << format_number(row.seconds);
  return out.str();
}

}  // namespace sentinel
