#include "okiss/evaluation.hpp"

#include <cmath>

#include "okiss/errors.hpp"

namespace okiss {

namespace {

double checked_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("fading factor must lie in (0, 1]");
  return alpha;
}

}  // namespace

FadingEstimator::FadingEstimator(double alpha) : alpha_(checked_alpha(alpha)) {}

double FadingEstimator::update(double loss) {
  if (!(loss >= 0.0 && loss <= 1.0)) throw DomainError("loss must lie in [0, 1]");
  loss_sum_ = loss + alpha_ * loss_sum_;
  weight_ = 1.0 + alpha_ * weight_;
  return estimate();
}

QTracker::QTracker(double alpha) : alpha_(checked_alpha(alpha)) {}

std::optional<double> QTracker::update(double loss_a, double loss_b) {
  if (!(loss_a >= 0.0) || !(loss_b >= 0.0) || !std::isfinite(loss_a) || !std::isfinite(loss_b))
    throw DomainError("losses must be finite and nonnegative");
  sum_a_ = loss_a + alpha_ * sum_a_;
  sum_b_ = loss_b + alpha_ * sum_b_;
  if (sum_a_ > 0.0 && sum_b_ > 0.0) return std::log(sum_a_ / sum_b_);
  return std::nullopt;
}

McNemarCounter::McNemarCounter(double threshold) : threshold_(threshold) {
  if (!(threshold_ >= 0.0)) throw DomainError("McNemar threshold must be nonnegative");
}

McNemarCounter::Result McNemarCounter::update(bool correct_a, bool correct_b) {
  if (!correct_a && correct_b) ++n01_;
  if (correct_a && !correct_b) ++n10_;
  return current();
}

McNemarCounter::Result McNemarCounter::current() const {
  const std::uint64_t total = n01_ + n10_;
  if (total == 0) return {};
  const double diff = static_cast<double>(n01_) - static_cast<double>(n10_);
  const double stat = diff * diff / static_cast<double>(total);
  return {stat, stat > threshold_};
}

}  // namespace okiss
