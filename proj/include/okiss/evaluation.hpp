#pragma once

#include <cstdint>
#include <optional>

namespace okiss {

/// Prequential loss estimate with a fading factor:
///   S_i = L_i + alpha * S_{i-1},  B_i = 1 + alpha * B_{i-1},  estimate = S_i / B_i.
class FadingEstimator {
 public:
  explicit FadingEstimator(double alpha);

  /// Losses must lie in [0, 1]. Returns the updated estimate.
  double update(double loss);

  /// S / B, or 0 before the first update.
  double estimate() const { return weight_ > 0.0 ? loss_sum_ / weight_ : 0.0; }
  double alpha() const { return alpha_; }
  double loss_sum() const { return loss_sum_; }
  double weight() const { return weight_; }

 private:
  double alpha_;
  double loss_sum_ = 0.0;
  double weight_ = 0.0;
};

/// Q_i = log(S_i^A / S_i^B) over fading accumulated losses. Negative values
/// mean A has accumulated less loss than B.
class QTracker {
 public:
  explicit QTracker(double alpha);

  /// nullopt while either accumulated loss is still zero.
  std::optional<double> update(double loss_a, double loss_b);

  double loss_sum_a() const { return sum_a_; }
  double loss_sum_b() const { return sum_b_; }
  double alpha() const { return alpha_; }

 private:
  double alpha_;
  double sum_a_ = 0.0;
  double sum_b_ = 0.0;
};

/// Cumulative McNemar test on paired predictions, without continuity
/// correction: (n01 - n10)^2 / (n01 + n10), 0 when there are no disagreements.
class McNemarCounter {
 public:
  /// Chi-square(1) critical value at the 0.99 confidence level.
  static constexpr double kDefaultThreshold = 6.635;

  struct Result {
    double statistic = 0.0;
    bool reject = false;
  };

  explicit McNemarCounter(double threshold = kDefaultThreshold);

  Result update(bool correct_a, bool correct_b);
  Result current() const;

  std::uint64_t n01() const { return n01_; }  // A wrong, B right
  std::uint64_t n10() const { return n10_; }  // A right, B wrong
  double threshold() const { return threshold_; }

 private:
  double threshold_;
  std::uint64_t n01_ = 0;
  std::uint64_t n10_ = 0;
};

}  // namespace okiss
