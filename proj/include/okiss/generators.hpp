#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "okiss/rng.hpp"
#include "okiss/schema.hpp"

namespace okiss {

/// A (possibly infinite) source of labelled instances.
class InstanceSource {
 public:
  virtual ~InstanceSource() = default;
  virtual const StreamSchema& schema() const = 0;
  /// nullopt once a finite source is exhausted.
  virtual std::optional<Instance> next() = 0;
};

enum class GeneratorKind { Sea, Hyperplane, RandomRbf, RandomTree, Waveform, Gaussian };

std::string_view to_string(GeneratorKind kind);
std::optional<GeneratorKind> parse_generator_kind(std::string_view name);

/// Unset fields take the per-kind defaults listed below.
struct GeneratorConfig {
  GeneratorKind kind = GeneratorKind::Sea;
  std::uint64_t seed = 1;

  // Label-flip probability. sea 0.10, hyperplane 0.05, tree 0, rbf 0, gaussian 0.
  // Waveform noise is additive Gaussian and not configurable.
  std::optional<double> noise;
  // hyperplane: weight change per instance (0.001); rbf: centroid speed (0.001).
  std::optional<double> drift;

  // sea: instances per concept block (25000) and the block thresholds (8, 9, 7, 9.5).
  std::optional<std::size_t> block_length;
  std::vector<double> sea_thresholds;

  // rbf: number of centroids (50).
  std::optional<std::size_t> centroids;
  // tree: maximum depth (5).
  std::optional<std::size_t> tree_depth;
  // gaussian: informative dimensions (2) and pure-noise dimensions (8).
  std::optional<std::size_t> informative_dims;
  std::optional<std::size_t> noise_dims;
};

/// Validates the config and builds the generator. Generators are infinite
/// and deterministic in (kind, seed, parameters).
std::unique_ptr<InstanceSource> make_generator(const GeneratorConfig& config);

/// SEA concepts: label 0 iff x1 + x2 <= threshold.
ClassId sea_concept(double x1, double x2, double threshold);

}  // namespace okiss
