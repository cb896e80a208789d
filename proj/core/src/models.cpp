#include "sentinel/models.hpp"

#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "sentinel/error.hpp"

namespace sentinel {
namespace {

constexpr double kSparseThreshold = 0.05;

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

// Calls emit(a, b) for each pair a < b of [0, m) included with probability p,
// in row-major order.
template <class Emit>
void bernoulli_pairs(std::size_t m, double p, Philox4x32& rng, Emit&& emit) {
  if (m < 2 || p <= 0.0) return;
  if (p >= 1.0) {
    for (Node a = 0; a + 1 < m; ++a)
      for (Node b = a + 1; b < m; ++b) emit(a, b);
    return;
  }
  if (p >= kSparseThreshold) {
    for (Node a = 0; a + 1 < m; ++a)
      for (Node b = a + 1; b < m; ++b)
        if (rng.uniform() < p) emit(a, b);
    return;
  }
  // Geometric skipping: gaps between successes are Geometric(p).
  const double log_q = std::log1p(-p);
  std::size_t a = 0;
  std::uint64_t off = 0;  // position within row a, pair (a, a + 1 + off)
  for (;;) {
    const double skip = std::floor(std::log(rng.uniform_pos()) / log_q);
    if (skip > 1e18) return;
    off += static_cast<std::uint64_t>(skip);
    while (off >= m - 1 - a) {
      off -= m - 1 - a;
      if (++a >= m - 1) return;
    }
    emit(static_cast<Node>(a), static_cast<Node>(a + 1 + off));
    ++off;
    while (off >= m - 1 - a) {
      off -= m - 1 - a;
      if (++a >= m - 1) return;
    }
  }
}

NodeSubset uniform_subset(std::size_t N, std::size_t n, Philox4x32& rng) {
  std::vector<Node> perm(N);
  for (std::size_t i = 0; i < N; ++i) perm[i] = static_cast<Node>(i);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + rng.below(N - i);
    std::swap(perm[i], perm[j]);
  }
  perm.resize(n);
  return NodeSubset::from_unsorted(std::move(perm));
}

}  // namespace

std::string_view variant_name(ModelVariant v) {
  switch (v) {
    case ModelVariant::Null: return "Null";
    case ModelVariant::PlantedKnownP0: return "PlantedKnownP0";
    case ModelVariant::PlantedFixedDegree: return "PlantedFixedDegree";
  }
  return "?";
}

ModelVariant parse_variant(std::string_view name) {
  if (name == "Null") return ModelVariant::Null;
  if (name == "PlantedKnownP0") return ModelVariant::PlantedKnownP0;
  if (name == "PlantedFixedDegree") return ModelVariant::PlantedFixedDegree;
  fail(ErrorKind::InvalidSpec, "unknown model variant '" + std::string(name) + "'");
}

ModelSpec ModelSpec::null(std::size_t N, double p0) {
  ModelSpec s;
  s.N = N;
  s.p0 = p0;
  return s;
}

ModelSpec ModelSpec::planted(std::size_t N, double p0, std::size_t n, double p1) {
  ModelSpec s;
  s.N = N;
  s.variant = ModelVariant::PlantedKnownP0;
  s.p0 = p0;
  s.n = n;
  s.p1 = p1;
  return s;
}

ModelSpec ModelSpec::fixed_degree(std::size_t N, double p0_prime, std::size_t n, double p1) {
  ModelSpec s;
  s.N = N;
  s.variant = ModelVariant::PlantedFixedDegree;
  s.p0_prime = p0_prime;
  s.n = n;
  s.p1 = p1;
  return s;
}

void ModelSpec::validate() const {
  require(N >= 1, ErrorKind::InvalidSpec, "N must be positive");
  if (variant == ModelVariant::Null) {
    require(is_probability(p0), ErrorKind::InvalidSpec, "p0 must lie in [0,1]");
    require(!planted_set.has_value(), ErrorKind::InvalidSpec, "Null model takes no planted_set");
    return;
  }
  const double bg = background_p();
  require(n >= 1 && n <= N, ErrorKind::InvalidSpec, "community size n must lie in [1, N]");
  require(is_probability(bg) && is_probability(p1), ErrorKind::InvalidSpec,
          "probabilities must lie in [0,1]");
  require(p1 >= bg, ErrorKind::InvalidSpec, "p1 must not be below the background probability");
  if (planted_set) {
    require(planted_set->size() == n, ErrorKind::InvalidSpec, "planted_set must have n nodes");
    require(planted_set->empty() || planted_set->nodes().back() < N, ErrorKind::InvalidSpec,
            "planted_set index outside [0, N)");
  }
}

void to_json(nlohmann::json& j, const ModelSpec& s) {
  j = nlohmann::json{{"N", s.N},
                     {"variant", std::string(variant_name(s.variant))},
                     {"p0", s.p0},
                     {"p0_prime", s.p0_prime},
                     {"p1", s.p1},
                     {"n", s.n}};
  if (s.planted_set) {
    j["planted_set"] = std::vector<Node>(s.planted_set->begin(), s.planted_set->end());
  } else {
    j["planted_set"] = nullptr;
  }
}

void from_json(const nlohmann::json& j, ModelSpec& s) {
  require(j.is_object(), ErrorKind::InvalidSpec, "model spec must be a JSON object");
  static const char* const kKeys[] = {"N", "variant", "p0", "p0_prime", "p1", "n", "planted_set"};
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* k : kKeys) known = known || key == k;
    require(known, ErrorKind::InvalidSpec, "unknown model spec key '" + key + "'");
  }
  require(j.contains("N"), ErrorKind::InvalidSpec, "model spec needs N");
  try {
    ModelSpec out;
    out.N = j.at("N").get<std::size_t>();
    out.variant = parse_variant(j.value("variant", std::string("Null")));
    out.p0 = j.value("p0", 0.0);
    out.p0_prime = j.value("p0_prime", 0.0);
    out.p1 = j.value("p1", 0.0);
    out.n = j.value("n", std::size_t{0});
    if (j.contains("planted_set") && !j["planted_set"].is_null())
      out.planted_set = NodeSubset::from_unsorted(j["planted_set"].get<std::vector<Node>>());
    s = std::move(out);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidSpec, e.what());
  }
}

Sample sample(const ModelSpec& spec, SeededStream stream, PlantedChoice choice) {
  spec.validate();
  Philox4x32 rng(stream);
  GraphBuilder b(spec.N);
  if (!spec.is_planted()) {
    bernoulli_pairs(spec.N, spec.p0, rng, [&](Node i, Node j) { b.add_edge_unchecked(i, j); });
    return {std::move(b).build(), std::nullopt};
  }

  NodeSubset planted = choice == PlantedChoice::UniformRandom ? uniform_subset(spec.N, spec.n, rng)
                       : spec.planted_set                      ? *spec.planted_set
                                                               : NodeSubset::prefix(spec.n);
  std::vector<char> inside(spec.N, 0);
  for (Node v : planted) inside[v] = 1;
  const auto members = planted.nodes();
  bernoulli_pairs(members.size(), spec.p1, rng,
                  [&](Node a, Node c) { b.add_edge_unchecked(members[a], members[c]); });
  bernoulli_pairs(spec.N, spec.background_p(), rng, [&](Node i, Node j) {
    if (!(inside[i] && inside[j])) b.add_edge_unchecked(i, j);
  });
  return {std::move(b).build(), std::move(planted)};
}

double effective_p0(double p0_prime, double p1, std::size_t n, std::size_t N) {
  require(is_probability(p0_prime) && is_probability(p1) && p0_prime <= p1, ErrorKind::InvalidSpec,
          "need 0 <= p0' <= p1 <= 1");
  require(N >= 2 && n <= N, ErrorKind::InvalidSpec, "need n <= N and N >= 2");
  return p0_prime + (p1 - p0_prime) * (static_cast<double>(half_pair(n)) / static_cast<double>(half_pair(N)));
}

ModelSpec matched_null(const ModelSpec& alt) {
  if (alt.variant == ModelVariant::PlantedFixedDegree)
    return ModelSpec::null(alt.N, effective_p0(alt.p0_prime, alt.p1, alt.n, alt.N));
  return ModelSpec::null(alt.N, alt.p0);
}

}  // namespace sentinel
