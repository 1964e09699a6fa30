#include "okiss/classifier.hpp"

#include <algorithm>
#include <optional>
#include <utility>

namespace okiss {

Prediction make_distribution(const std::vector<Neighbor>& neighbors, std::size_t num_classes,
                             Voting voting) {
  Prediction out;
  if (neighbors.empty()) return out;

  out.distribution.assign(num_classes, 0.0);
  for (const auto& nb : neighbors) {
    if (nb.instance.label >= num_classes) throw StructuralError("neighbor label out of range");
    const double w = voting == Voting::Majority ? 1.0 : 1.0 / (nb.distance + kVoteEpsilon);
    out.distribution[nb.instance.label] += w;
  }
  double total = 0.0;
  for (double w : out.distribution) total += w;
  for (double& w : out.distribution) w /= total;

  // max_element returns the first maximum, i.e. the smallest class id.
  const auto best = std::max_element(out.distribution.begin(), out.distribution.end());
  out.predicted_label = static_cast<ClassId>(best - out.distribution.begin());
  out.abstained = false;
  return out;
}

void accumulate_post_learning(Accumulator& acc, const Instance& inst,
                              const std::vector<Neighbor>& neighbors) {
  for (const auto& nb : neighbors)
    acc.accumulate_pair(inst.encoded, nb.instance.encoded, inst.label == nb.instance.label);
}

OnlineKissmeStream::OnlineKissmeStream(const StreamSchema& schema, ClassifierConfig config)
    : config_(config),
      dim_(schema.encoded_dim()),
      num_classes_(schema.num_classes()),
      base_(config.max_base, schema.encoded_dim()),
      acc_(static_cast<Eigen::Index>(schema.encoded_dim())),
      metric_(MetricMatrix::Identity(static_cast<Eigen::Index>(dim_),
                                     static_cast<Eigen::Index>(dim_))),
      detector_(config.drift) {
  if (config_.k < 1) throw DomainError("k must be positive");
  if (!(config_.ridge >= 0.0)) throw DomainError("ridge must be nonnegative");
}

Prediction OnlineKissmeStream::predict_with(const Instance& inst,
                                            std::vector<Neighbor>& neighbors) const {
  if (static_cast<std::size_t>(inst.encoded.size()) != dim_ || inst.label >= num_classes_)
    throw StructuralError("instance does not match the classifier schema");
  neighbors.clear();
  if (!base_.empty()) neighbors = base_.knn(inst.encoded, config_.k, metric_);
  Prediction pred = make_distribution(neighbors, num_classes_, config_.voting);
  // The true label is only consulted after the vote.
  pred.correct = !pred.abstained && pred.predicted_label == inst.label;
  return pred;
}

Prediction OnlineKissmeStream::predict(const Instance& inst) const {
  std::vector<Neighbor> neighbors;
  return predict_with(inst, neighbors);
}

StepOutcome OnlineKissmeStream::process(const Instance& inst) {
  std::vector<Neighbor> neighbors;
  Prediction pred = predict_with(inst, neighbors);
  if (!learned_) return bootstrap_step(inst, std::move(pred));
  return learned_step(inst, std::move(pred), neighbors);
}

StepOutcome OnlineKissmeStream::bootstrap_step(const Instance& inst, Prediction prediction) {
  StepOutcome out{std::move(prediction), DriftLevel::InControl, false, false};

  const bool completes = base_.size() + 1 >= config_.max_base;
  std::optional<Accumulator> saved;
  if (completes && config_.learn_metric) saved = acc_;

  if (base_.size() < config_.max_base) {
    if (config_.learn_metric)
      for (const auto& stored : base_.instances())
        acc_.accumulate_pair(inst.encoded, stored.encoded, stored.label == inst.label);
    base_.insert(inst);
  }

  if (base_.size() >= config_.max_base) {
    if (config_.learn_metric) {
      try {
        metric_ = compute_metric(acc_, config_.ridge);
      } catch (...) {
        acc_ = std::move(*saved);
        base_.remove(inst.arrival_index);
        throw;
      }
      out.metric_updated = true;
    }
    learned_ = true;
  }
  return out;
}

StepOutcome OnlineKissmeStream::learned_step(const Instance& inst, Prediction prediction,
                                             const std::vector<Neighbor>& neighbors) {
  StepOutcome out{std::move(prediction), DriftLevel::InControl, false, false};
  const bool correct = out.prediction.correct;

  const DriftDetector saved_detector = detector_;
  out.level = detector_.update(correct);
  const bool recompute =
      config_.learn_metric && out.level == DriftLevel::Warning &&
      (!config_.warning_edges_only || detector_.warning_entered());

  if (config_.learn_metric) {
    std::optional<Accumulator> saved_acc;
    if (recompute) saved_acc = acc_;
    accumulate_post_learning(acc_, inst, neighbors);
    if (recompute) {
      try {
        metric_ = compute_metric(acc_, config_.ridge);
      } catch (...) {
        acc_ = std::move(*saved_acc);
        detector_ = saved_detector;
        throw;
      }
      out.metric_updated = true;
    }
  }

  if (out.level == DriftLevel::OutOfControl) {
    // Everything but the metric goes back to its initial state; the arriving
    // instance is not stored, so the base is empty after this step.
    base_.clear();
    acc_.clear();
    detector_.reset();
    learned_ = false;
    out.reset = true;
    return out;
  }

  if (correct) base_.edit_after_correct(inst, neighbors);
  base_.insert(inst);
  base_.evict_to_capacity();
  return out;
}

}  // namespace okiss
