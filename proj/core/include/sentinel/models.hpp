#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

#include "sentinel/graph.hpp"
#include "sentinel/random.hpp"

namespace sentinel {

enum class ModelVariant { Null, PlantedKnownP0, PlantedFixedDegree };

std::string_view variant_name(ModelVariant v);
ModelVariant parse_variant(std::string_view name);

/// Parameters of a null or planted sampling distribution.
///
/// Null uses `p0`. PlantedKnownP0 uses `p0` off the community and `p1` on it.
/// PlantedFixedDegree uses `p0_prime` off the community; its matching null is
/// Null with p0 = effective_p0(p0_prime, p1, n, N).
struct ModelSpec {
  std::size_t N = 0;
  ModelVariant variant = ModelVariant::Null;
  double p0 = 0.0;
  double p0_prime = 0.0;
  double p1 = 0.0;
  std::size_t n = 0;
  std::optional<NodeSubset> planted_set;

  static ModelSpec null(std::size_t N, double p0);
  static ModelSpec planted(std::size_t N, double p0, std::size_t n, double p1);
  static ModelSpec fixed_degree(std::size_t N, double p0_prime, std::size_t n, double p1);

  bool is_planted() const noexcept { return variant != ModelVariant::Null; }
  /// Connection probability off the community.
  double background_p() const noexcept {
    return variant == ModelVariant::PlantedFixedDegree ? p0_prime : p0;
  }
  /// Throws InvalidSpec.
  void validate() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

void to_json(nlohmann::json& j, const ModelSpec& s);
/// Rejects unknown keys and missing required fields with InvalidSpec.
void from_json(const nlohmann::json& j, ModelSpec& s);

enum class PlantedChoice { Default, UniformRandom };

struct Sample {
  Graph graph;
  std::optional<NodeSubset> planted;
};

/// Draws one graph. Default planted set is the explicit `planted_set` when
/// given, else {0, ..., n-1}; UniformRandom draws it from the stream first.
Sample sample(const ModelSpec& spec, SeededStream stream,
              PlantedChoice choice = PlantedChoice::Default);

/// n(n-1)/2.
constexpr std::uint64_t half_pair(std::uint64_t m) noexcept { return m < 2 ? 0 : m * (m - 1) / 2; }

/// Null probability giving the same expected total degree as the
/// fixed-degree alternative: p0' + (p1 - p0') n^(2) / N^(2).
double effective_p0(double p0_prime, double p1, std::size_t n, std::size_t N);

/// The Null spec matched to a fixed-degree alternative.
ModelSpec matched_null(const ModelSpec& fixed_degree_alt);

}  // namespace sentinel
