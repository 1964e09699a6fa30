#include "okiss/instance_base.hpp"

#include <algorithm>
#include <numeric>

namespace okiss {

InstanceBase::InstanceBase(std::size_t capacity, std::size_t dim) : capacity_(capacity), dim_(dim) {
  if (capacity_ < 1) throw DomainError("instance base capacity must be positive");
  if (dim_ < 1) throw StructuralError("instance dimension must be positive");
  store_.reserve(capacity_ + 1);
}

void InstanceBase::insert(Instance inst) {
  if (static_cast<std::size_t>(inst.encoded.size()) != dim_)
    throw StructuralError("instance dimension does not match the base");
  if (!store_.empty() && inst.arrival_index <= store_.back().arrival_index)
    throw StructuralError("arrival indices must be strictly increasing");
  store_.push_back(std::move(inst));
}

std::vector<Neighbor> InstanceBase::knn(const FeatureVector& query, std::size_t k,
                                        const MetricMatrix& metric) const {
  if (store_.empty()) throw Error("no neighbors: instance base is empty");
  if (k < 1) throw DomainError("k must be positive");
  if (static_cast<std::size_t>(query.size()) != dim_)
    throw StructuralError("query dimension does not match the base");

  const auto n = static_cast<Eigen::Index>(store_.size());
  Matrix<double> points(n, static_cast<Eigen::Index>(dim_));
  for (Eigen::Index i = 0; i < n; ++i) points.row(i) = store_[static_cast<std::size_t>(i)].encoded.transpose();
  const FeatureVector dist = mahalanobis_distances(metric, points, query);

  std::vector<std::size_t> order(store_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t take = std::min(k, order.size());
  // Larger position == larger arrival index, so ties go to the later slot.
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [&dist](std::size_t a, std::size_t b) {
                      const double da = dist(static_cast<Eigen::Index>(a));
                      const double db = dist(static_cast<Eigen::Index>(b));
                      if (da != db) return da < db;
                      return a > b;
                    });

  std::vector<Neighbor> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i)
    out.push_back(Neighbor{store_[order[i]], dist(static_cast<Eigen::Index>(order[i]))});
  return out;
}

bool InstanceBase::remove(std::uint64_t arrival_index) {
  const auto it = std::lower_bound(
      store_.begin(), store_.end(), arrival_index,
      [](const Instance& inst, std::uint64_t idx) { return inst.arrival_index < idx; });
  if (it == store_.end() || it->arrival_index != arrival_index) return false;
  store_.erase(it);
  return true;
}

void InstanceBase::edit_after_correct(const Instance& arriving,
                                      const std::vector<Neighbor>& neighbors) {
  for (const auto& nb : neighbors)
    if (nb.instance.label == arriving.label) remove(nb.instance.arrival_index);
}

void InstanceBase::evict_to_capacity() {
  if (store_.size() <= capacity_) return;
  const auto excess = static_cast<std::ptrdiff_t>(store_.size() - capacity_);
  store_.erase(store_.begin(), store_.begin() + excess);
}

}  // namespace okiss
