#include <algorithm>
#include <set>

#include "doctest.h"
#include "okiss/instance_base.hpp"
#include "okiss/rng.hpp"

using namespace okiss;

namespace {

Instance point(std::uint64_t arrival, ClassId label, std::initializer_list<double> xs) {
  Instance inst;
  inst.encoded.resize(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) {
    inst.encoded(i++) = x;
    inst.raw.emplace_back(x);
  }
  inst.label = label;
  inst.arrival_index = arrival;
  return inst;
}

std::vector<std::uint64_t> arrivals(const InstanceBase& base) {
  std::vector<std::uint64_t> out;
  for (const auto& inst : base.instances()) out.push_back(inst.arrival_index);
  return out;
}

constexpr ClassId A = 0;
constexpr ClassId B = 1;

}  // namespace

TEST_CASE("insert") {
  InstanceBase base(2, 2);
  base.insert(point(1, A, {0, 0}));
  CHECK(base.size() == 1);
  base.insert(point(2, A, {0, 0}));
  // No eviction on insert: capacity + 1 is allowed transiently.
  base.insert(point(3, A, {0, 0}));
  CHECK(base.size() == 3);
  CHECK(base.instances()[1].encoded == base.instances()[2].encoded);

  CHECK_THROWS_AS(base.insert(point(4, A, {0, 0, 0})), StructuralError);
  CHECK_THROWS_AS(base.insert(point(3, A, {0, 0})), StructuralError);
}

TEST_CASE("knn examples") {
  InstanceBase base(10, 2);
  base.insert(point(1, A, {0, 0}));
  base.insert(point(2, A, {1, 0}));
  base.insert(point(3, B, {5, 5}));
  const MetricMatrix eye = MetricMatrix::Identity(2, 2);

  SUBCASE("two nearest under the identity") {
    FeatureVector q(2);
    q << 0.1, 0.0;
    const auto nn = base.knn(q, 2, eye);
    REQUIRE(nn.size() == 2);
    CHECK(nn[0].instance.arrival_index == 1);
    CHECK(nn[1].instance.arrival_index == 2);
    CHECK(nn[0].distance == doctest::Approx(0.1));
    CHECK(nn[1].distance == doctest::Approx(0.9));
  }
  SUBCASE("k beyond size returns everything sorted") {
    FeatureVector q(2);
    q << 4.0, 4.0;
    const auto nn = base.knn(q, 10, eye);
    REQUIRE(nn.size() == 3);
    CHECK(nn[0].instance.arrival_index == 3);
    CHECK(std::is_sorted(nn.begin(), nn.end(),
                         [](const Neighbor& a, const Neighbor& b) { return a.distance < b.distance; }));
  }
  SUBCASE("zero metric returns the newest instances") {
    const MetricMatrix zero = MetricMatrix::Zero(2, 2);
    FeatureVector q(2);
    q << 0.0, 0.0;
    const auto nn = base.knn(q, 2, zero);
    REQUIRE(nn.size() == 2);
    CHECK(nn[0].instance.arrival_index == 3);
    CHECK(nn[1].instance.arrival_index == 2);
    CHECK(nn[0].distance == 0.0);
  }
}

TEST_CASE("knn errors") {
  InstanceBase base(3, 2);
  const MetricMatrix eye = MetricMatrix::Identity(2, 2);
  FeatureVector q = FeatureVector::Zero(2);
  CHECK_THROWS_AS(base.knn(q, 1, eye), Error);
  base.insert(point(1, A, {0, 0}));
  CHECK_THROWS_AS(base.knn(q, 0, eye), DomainError);
  CHECK_THROWS_AS(base.knn(FeatureVector::Zero(3), 1, eye), StructuralError);
}

TEST_CASE("knn agrees with a brute-force scan") {
  Rng rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.below(5));
    const std::size_t n = 1 + rng.below(1000);
    InstanceBase base(n, static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < n; ++i) {
      Instance inst;
      inst.encoded.resize(d);
      // Coarse grid so that ties actually occur.
      for (Eigen::Index j = 0; j < d; ++j) inst.encoded(j) = static_cast<double>(rng.below(6));
      inst.label = static_cast<ClassId>(rng.below(3));
      inst.arrival_index = i;
      base.insert(inst);
    }
    MetricMatrix g(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) g(i, j) = rng.normal();
    const MetricMatrix m = g.transpose() * g;
    FeatureVector q(d);
    for (Eigen::Index j = 0; j < d; ++j) q(j) = rng.uniform(0.0, 5.0);
    const std::size_t k = 1 + rng.below(15);

    // Brute force: explicit quadratic forms for every stored instance.
    std::vector<std::pair<double, std::uint64_t>> all;
    for (const auto& inst : base.instances()) {
      const FeatureVector diff = inst.encoded - q;
      double quad = 0.0;
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) quad += diff(i) * m(i, j) * diff(j);
      all.emplace_back(std::sqrt(std::max(0.0, quad)), inst.arrival_index);
    }

    const auto nn = base.knn(q, k, m);
    REQUIRE(nn.size() == std::min(k, n));
    for (std::size_t i = 1; i < nn.size(); ++i) CHECK(nn[i - 1].distance <= nn[i].distance);
    std::set<std::uint64_t> chosen;
    for (const auto& nb : nn) chosen.insert(nb.instance.arrival_index);
    const double worst_returned = nn.back().distance;
    for (const auto& [dist, idx] : all)
      if (!chosen.count(idx)) CHECK(dist >= worst_returned - 1e-9);
  }
}

TEST_CASE("edit_after_correct") {
  const MetricMatrix eye = MetricMatrix::Identity(1, 1);
  InstanceBase base(10, 1);
  base.insert(point(1, A, {0}));
  base.insert(point(2, A, {1}));
  base.insert(point(3, B, {2}));
  base.insert(point(4, A, {3}));
  base.insert(point(5, B, {50}));

  SUBCASE("all same-label neighbors removed") {
    const Instance arriving = point(6, A, {1});
    FeatureVector q(1);
    q << 1.0;
    auto nn = base.knn(q, 3, eye);  // arrivals 2, 3, 1 / 4
    nn.erase(std::remove_if(nn.begin(), nn.end(),
                            [](const Neighbor& nb) { return nb.instance.label != A; }),
             nn.end());
    base.edit_after_correct(arriving, nn);
    for (const auto& nb : nn) {
      const auto ids = arrivals(base);
      CHECK(std::find(ids.begin(), ids.end(), nb.instance.arrival_index) == ids.end());
    }
  }
  SUBCASE("mixed neighbors keep the other label") {
    const Instance arriving = point(6, A, {1.9});
    FeatureVector q(1);
    q << 1.9;
    const auto nn = base.knn(q, 3, eye);  // arrivals 3 (B), 2 (A), 4 (A)
    base.edit_after_correct(arriving, nn);
    CHECK(arrivals(base) == std::vector<std::uint64_t>{1, 3, 5});
    // Editing again with the same list is a no-op.
    base.edit_after_correct(arriving, nn);
    CHECK(arrivals(base) == std::vector<std::uint64_t>{1, 3, 5});
  }
  SUBCASE("never removes a different label") {
    const Instance arriving = point(6, B, {0});
    FeatureVector q(1);
    q << 0.0;
    base.edit_after_correct(arriving, base.knn(q, 5, eye));
    for (const auto& inst : base.instances()) CHECK(inst.label == A);
    CHECK(base.size() == 3);
  }
}

TEST_CASE("evict_to_capacity") {
  InstanceBase base(3, 1);
  for (std::uint64_t i = 1; i <= 3; ++i) base.insert(point(i, A, {0}));
  base.evict_to_capacity();
  CHECK(base.size() == 3);
  base.insert(point(4, A, {0}));
  base.evict_to_capacity();
  CHECK(arrivals(base) == std::vector<std::uint64_t>{2, 3, 4});

  InstanceBase fifo(3, 1);
  for (std::uint64_t i = 1; i <= 5; ++i) {
    fifo.insert(point(i, A, {0}));
    fifo.evict_to_capacity();
  }
  CHECK(arrivals(fifo) == std::vector<std::uint64_t>{3, 4, 5});
}
