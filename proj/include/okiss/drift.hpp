#pragma once

#include <cstddef>
#include <limits>
#include <string_view>

namespace okiss {

enum class DriftLevel { InControl = 0, Warning = 1, OutOfControl = 2 };

std::string_view to_string(DriftLevel level);

struct DriftConfig {
  double warning_sigmas = 2.0;
  double drift_sigmas = 3.0;
  std::size_t min_observations = 30;
};

/// DDM over the prediction-correctness stream. Tracks the running error
/// rate p, its standard error s = sqrt(p(1-p)/n) and the (p, s) pair at the
/// smallest p + s seen after the warm-up.
class DriftDetector {
 public:
  explicit DriftDetector(DriftConfig config = {});

  DriftLevel update(bool correct);
  void reset();

  std::size_t n() const { return n_; }
  double p() const { return p_; }
  double s() const { return s_; }
  double p_min() const { return p_min_; }
  double s_min() const { return s_min_; }
  bool has_minimum() const { return p_min_ != std::numeric_limits<double>::infinity(); }
  DriftLevel level() const { return level_; }
  /// True when the last update moved the level into Warning from below.
  bool warning_entered() const { return warning_entered_; }
  const DriftConfig& config() const { return config_; }

 private:
  DriftConfig config_;
  std::size_t n_ = 0;
  std::size_t errors_ = 0;
  double p_ = 0.0;
  double s_ = 0.0;
  double p_min_ = std::numeric_limits<double>::infinity();
  double s_min_ = std::numeric_limits<double>::infinity();
  DriftLevel level_ = DriftLevel::InControl;
  bool warning_entered_ = false;
};

}  // namespace okiss
