#pragma once

#include <cstddef>
#include <vector>

#include "okiss/metric.hpp"
#include "okiss/schema.hpp"

namespace okiss {

struct Neighbor {
  Instance instance;
  double distance = 0.0;
};

/// Bounded case memory in arrival order. Insertion never evicts; eviction
/// and editing are separate steps so the classifier controls their order.
class InstanceBase {
 public:
  InstanceBase(std::size_t capacity, std::size_t dim);

  /// Appends `inst`. Its arrival index must exceed every stored one.
  void insert(Instance inst);

  /// The min(k, size) nearest instances under `metric`, ascending by
  /// distance; equal distances put the newer instance first.
  std::vector<Neighbor> knn(const FeatureVector& query, std::size_t k,
                            const MetricMatrix& metric) const;

  /// Removes every neighbor sharing the arriving instance's label.
  void edit_after_correct(const Instance& arriving, const std::vector<Neighbor>& neighbors);

  /// Drops oldest instances until size() <= capacity().
  void evict_to_capacity();

  /// Removes the instance with this arrival index; returns false if absent.
  bool remove(std::uint64_t arrival_index);

  void clear() { store_.clear(); }

  std::size_t size() const { return store_.size(); }
  bool empty() const { return store_.empty(); }
  std::size_t capacity() const { return capacity_; }
  std::size_t dim() const { return dim_; }
  const std::vector<Instance>& instances() const { return store_; }

 private:
  std::size_t capacity_;
  std::size_t dim_;
  std::vector<Instance> store_;
};

}  // namespace okiss
