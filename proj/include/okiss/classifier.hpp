#pragma once

#include <cstddef>
#include <vector>

#include "okiss/drift.hpp"
#include "okiss/instance_base.hpp"
#include "okiss/metric.hpp"
#include "okiss/schema.hpp"

namespace okiss {

enum class Voting { InverseDistance, Majority };

struct ClassifierConfig {
  std::size_t k = 10;
  std::size_t max_base = 500;
  double ridge = kDefaultRidge;
  Voting voting = Voting::InverseDistance;
  DriftConfig drift;
  // Recompute the metric only on the first tick of each warning episode.
  bool warning_edges_only = false;
  // false freezes the metric at identity: the Euclidean ablation baseline.
  bool learn_metric = true;
};

/// Additive term in the inverse-distance vote weight 1 / (d + eps).
inline constexpr double kVoteEpsilon = 1e-8;

struct Prediction {
  ClassId predicted_label = 0;
  std::vector<double> distribution;  // empty when abstained
  bool correct = false;
  bool abstained = true;
};

/// Everything a single process() call did, for reporting.
struct StepOutcome {
  Prediction prediction;
  DriftLevel level = DriftLevel::InControl;  // InControl during bootstrap
  bool metric_updated = false;
  bool reset = false;
};

/// Class distribution from neighbor votes. Ties in the argmax go to the
/// smallest class id.
Prediction make_distribution(const std::vector<Neighbor>& neighbors, std::size_t num_classes,
                             Voting voting);

/// Adds one constraint pair per neighbor: similar when the labels agree.
void accumulate_post_learning(Accumulator& acc, const Instance& inst,
                              const std::vector<Neighbor>& neighbors);

/// Instance-based stream classifier with an online KISSME metric.
///
/// Until the base first fills up, every arriving instance is stored and paired
/// with all stored instances to build the similar/dissimilar constraint sums;
/// at max_base the metric is computed and the model switches to the learned
/// phase. There, each instance is classified by k-NN, paired with its
/// neighbors, and fed to a DDM detector: a warning recomputes the metric, an
/// out-of-control signal empties the base and constraints and returns to
/// bootstrap while keeping the metric. Correct predictions delete the
/// same-label neighbors; the instance is then stored and the oldest instances
/// evicted down to capacity.
class OnlineKissmeStream {
 public:
  OnlineKissmeStream(const StreamSchema& schema, ClassifierConfig config = {});

  /// Test-then-train step. On a numeric failure the model is left as it was
  /// before the call and the error is rethrown.
  StepOutcome process(const Instance& inst);

  /// Prediction from the current base and metric without learning.
  Prediction predict(const Instance& inst) const;

  const ClassifierConfig& config() const { return config_; }
  const InstanceBase& base() const { return base_; }
  const Accumulator& accumulator() const { return acc_; }
  const MetricMatrix& metric() const { return metric_; }
  const DriftDetector& detector() const { return detector_; }
  bool learned() const { return learned_; }
  std::size_t num_classes() const { return num_classes_; }

 private:
  Prediction predict_with(const Instance& inst, std::vector<Neighbor>& neighbors) const;
  StepOutcome bootstrap_step(const Instance& inst, Prediction prediction);
  StepOutcome learned_step(const Instance& inst, Prediction prediction,
                           const std::vector<Neighbor>& neighbors);

  ClassifierConfig config_;
  std::size_t dim_;
  std::size_t num_classes_;
  InstanceBase base_;
  Accumulator acc_;
  MetricMatrix metric_;
  DriftDetector detector_;
  bool learned_ = false;
};

}  // namespace okiss
