#include "okiss/drift.hpp"

#include <cmath>

#include "okiss/errors.hpp"

namespace okiss {

std::string_view to_string(DriftLevel level) {
  switch (level) {
    case DriftLevel::InControl: return "in_control";
    case DriftLevel::Warning: return "warning";
    case DriftLevel::OutOfControl: return "out_of_control";
  }
  return "unknown";
}

DriftDetector::DriftDetector(DriftConfig config) : config_(config) {
  if (config_.min_observations < 1) throw DomainError("min_observations must be positive");
  if (!(config_.warning_sigmas > 0.0) || !(config_.drift_sigmas >= config_.warning_sigmas))
    throw DomainError("need 0 < warning_sigmas <= drift_sigmas");
}

DriftLevel DriftDetector::update(bool correct) {
  const DriftLevel previous = level_;
  ++n_;
  if (!correct) ++errors_;
  p_ = static_cast<double>(errors_) / static_cast<double>(n_);
  s_ = std::sqrt(p_ * (1.0 - p_) / static_cast<double>(n_));

  level_ = DriftLevel::InControl;
  if (n_ >= config_.min_observations) {
    if (p_ + s_ < p_min_ + s_min_) {
      p_min_ = p_;
      s_min_ = s_;
    }
    // Strict comparisons: an error-free run leaves p + s == p_min + s_min == 0,
    // which must read as in control.
    const double level = p_ + s_;
    if (level > p_min_ + config_.drift_sigmas * s_min_)
      level_ = DriftLevel::OutOfControl;
    else if (level > p_min_ + config_.warning_sigmas * s_min_)
      level_ = DriftLevel::Warning;
  }
  warning_entered_ = level_ == DriftLevel::Warning && previous != DriftLevel::Warning;
  return level_;
}

void DriftDetector::reset() { *this = DriftDetector(config_); }

}  // namespace okiss
