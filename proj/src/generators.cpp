#include "okiss/generators.hpp"

#include <array>
#include <cmath>

namespace okiss {

namespace {

std::vector<Attribute> numeric_attributes(std::size_t count, std::string_view prefix = "att") {
  std::vector<Attribute> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(Attribute::numeric(std::string(prefix) + std::to_string(i + 1)));
  return out;
}

double checked_probability(std::optional<double> value, double fallback, const char* what) {
  const double p = value.value_or(fallback);
  if (!(p >= 0.0 && p <= 0.5)) throw DomainError(std::string(what) + " must lie in [0, 0.5]");
  return p;
}

double checked_nonnegative(std::optional<double> value, double fallback, const char* what) {
  const double v = value.value_or(fallback);
  if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be >= 0");
  return v;
}

ClassId flip_binary(ClassId label) { return label == 0 ? 1 : 0; }

// Base class holding the schema, the RNG and the arrival counter.
class GeneratorBase : public InstanceSource {
 public:
  GeneratorBase(StreamSchema schema, std::uint64_t seed) : schema_(std::move(schema)), rng_(seed) {}

  const StreamSchema& schema() const override { return schema_; }

  std::optional<Instance> next() override {
    std::vector<RawValue> raw;
    raw.reserve(schema_.attributes().size());
    const ClassId label = generate(raw);
    return make_instance(std::move(raw), label, arrival_++, schema_);
  }

 protected:
  virtual ClassId generate(std::vector<RawValue>& raw) = 0;
  Rng& rng() { return rng_; }
  std::uint64_t arrival() const { return arrival_; }

 private:
  StreamSchema schema_;
  Rng rng_;
  std::uint64_t arrival_ = 0;
};

// Three uniform attributes on [0, 10]; only the first two are relevant.
// The threshold cycles through the blocks every block_length instances.
class SeaGenerator final : public GeneratorBase {
 public:
  explicit SeaGenerator(const GeneratorConfig& c)
      : GeneratorBase(StreamSchema(numeric_attributes(3), 2), c.seed),
        noise_(checked_probability(c.noise, 0.10, "noise")),
        block_length_(c.block_length.value_or(25000)),
        thresholds_(c.sea_thresholds.empty() ? std::vector<double>{8.0, 9.0, 7.0, 9.5}
                                             : c.sea_thresholds) {
    if (block_length_ < 1) throw DomainError("block_length must be positive");
  }

 private:
  ClassId generate(std::vector<RawValue>& raw) override {
    const double threshold = thresholds_[(arrival() / block_length_) % thresholds_.size()];
    std::array<double, 3> x{};
    for (double& v : x) v = rng().uniform(0.0, 10.0);
    for (double v : x) raw.emplace_back(v);
    ClassId label = sea_concept(x[0], x[1], threshold);
    if (rng().bernoulli(noise_)) label = flip_binary(label);
    return label;
  }

  double noise_;
  std::size_t block_length_;
  std::vector<double> thresholds_;
};

// Ten uniform attributes on [0, 1]; label 1 iff sum(w_i x_i) >= sum(w_i) / 2.
// Every weight moves by direction_i * drift per instance and each direction
// flips with probability 0.1.
class HyperplaneGenerator final : public GeneratorBase {
 public:
  static constexpr std::size_t kDims = 10;
  static constexpr double kFlipProbability = 0.1;

  explicit HyperplaneGenerator(const GeneratorConfig& c)
      : GeneratorBase(StreamSchema(numeric_attributes(kDims), 2), c.seed),
        noise_(checked_probability(c.noise, 0.05, "noise")),
        drift_(checked_nonnegative(c.drift, 0.001, "drift")) {
    for (std::size_t i = 0; i < kDims; ++i) {
      weights_[i] = rng().uniform();
      directions_[i] = 1.0;
    }
  }

 private:
  ClassId generate(std::vector<RawValue>& raw) override {
    double dot = 0.0;
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < kDims; ++i) {
      const double x = rng().uniform();
      raw.emplace_back(x);
      dot += weights_[i] * x;
      weight_sum += weights_[i];
    }
    ClassId label = dot > 0.5 * weight_sum ? 1 : 0;
    if (rng().bernoulli(noise_)) label = flip_binary(label);

    for (std::size_t i = 0; i < kDims; ++i) {
      weights_[i] += directions_[i] * drift_;
      if (rng().bernoulli(kFlipProbability)) directions_[i] = -directions_[i];
    }
    return label;
  }

  double noise_;
  double drift_;
  std::array<double, kDims> weights_{};
  std::array<double, kDims> directions_{};
};

// Gaussian clusters around random centroids in [0, 1]^10. Each centroid has a
// fixed label, spread and sampling weight. With drift > 0 every centroid moves
// at that speed in a random direction, bouncing off the unit cube.
class RandomRbfGenerator final : public GeneratorBase {
 public:
  static constexpr std::size_t kDims = 10;

  explicit RandomRbfGenerator(const GeneratorConfig& c)
      : GeneratorBase(StreamSchema(numeric_attributes(kDims), 2), c.seed),
        noise_(checked_probability(c.noise, 0.0, "noise")),
        speed_(checked_nonnegative(c.drift, 0.001, "drift")) {
    const std::size_t count = c.centroids.value_or(50);
    if (count < 1) throw DomainError("centroids must be positive");
    centroids_.resize(count);
    double total = 0.0;
    for (auto& cen : centroids_) {
      cen.centre.resize(kDims);
      for (double& v : cen.centre) v = rng().uniform();
      cen.label = static_cast<ClassId>(rng().below(2));
      cen.spread = rng().uniform();
      total += rng().uniform();
      cen.cumulative_weight = total;
      cen.velocity = random_direction(speed_);
    }
    total_weight_ = total;
  }

 private:
  struct Centroid {
    std::vector<double> centre;
    std::vector<double> velocity;
    ClassId label = 0;
    double spread = 0.0;
    double cumulative_weight = 0.0;
  };

  std::vector<double> random_direction(double length) {
    std::vector<double> dir(kDims);
    double norm = 0.0;
    for (double& v : dir) {
      v = rng().uniform(-1.0, 1.0);
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (double& v : dir) v = norm > 0.0 ? v / norm * length : 0.0;
    return dir;
  }

  void move_centroids() {
    for (auto& cen : centroids_) {
      for (std::size_t i = 0; i < kDims; ++i) {
        double& x = cen.centre[i];
        x += cen.velocity[i];
        if (x > 1.0) {
          x = 2.0 - x;
          cen.velocity[i] = -cen.velocity[i];
        } else if (x < 0.0) {
          x = -x;
          cen.velocity[i] = -cen.velocity[i];
        }
      }
    }
  }

  ClassId generate(std::vector<RawValue>& raw) override {
    if (speed_ > 0.0) move_centroids();
    const double pick = rng().uniform() * total_weight_;
    std::size_t idx = 0;
    while (idx + 1 < centroids_.size() && centroids_[idx].cumulative_weight <= pick) ++idx;
    const Centroid& cen = centroids_[idx];

    const std::vector<double> dir = random_direction(1.0);
    const double magnitude = rng().normal() * cen.spread;
    for (std::size_t i = 0; i < kDims; ++i) raw.emplace_back(cen.centre[i] + dir[i] * magnitude);
    ClassId label = cen.label;
    if (rng().bernoulli(noise_)) label = flip_binary(label);
    return label;
  }

  double noise_;
  double speed_;
  std::vector<Centroid> centroids_;
  double total_weight_ = 0.0;
};

// A random decision tree over 5 numeric attributes on [0, 1] and 5 nominal
// attributes with 5 values each. Leaves may appear from depth 3 on (with
// probability 0.15 per node) and are forced at the maximum depth. Numeric
// split points are drawn inside the range still reachable at the node; a
// nominal attribute is used at most once per path.
class RandomTreeGenerator final : public GeneratorBase {
 public:
  static constexpr std::size_t kNumeric = 5;
  static constexpr std::size_t kNominal = 5;
  static constexpr std::size_t kValues = 5;
  static constexpr std::size_t kFirstLeafLevel = 3;
  static constexpr double kLeafFraction = 0.15;

  explicit RandomTreeGenerator(const GeneratorConfig& c)
      : GeneratorBase(make_schema(), c.seed),
        noise_(checked_probability(c.noise, 0.0, "noise")),
        max_depth_(c.tree_depth.value_or(5)) {
    if (max_depth_ < 1) throw DomainError("tree_depth must be positive");
    std::vector<bool> nominal_used(kNominal, false);
    std::vector<double> lo(kNumeric, 0.0);
    std::vector<double> hi(kNumeric, 1.0);
    build(0, nominal_used, lo, hi);
  }

 private:
  struct Node {
    bool leaf = true;
    ClassId label = 0;
    std::size_t attribute = 0;  // index into the schema's attribute list
    double split = 0.0;
    std::vector<std::size_t> children;
  };

  static StreamSchema make_schema() {
    std::vector<Attribute> attrs = numeric_attributes(kNumeric, "num");
    std::vector<std::string> values;
    for (std::size_t v = 0; v < kValues; ++v) values.push_back("v" + std::to_string(v + 1));
    for (std::size_t i = 0; i < kNominal; ++i)
      attrs.push_back(Attribute::nominal("nom" + std::to_string(i + 1), values));
    return StreamSchema(std::move(attrs), 2);
  }

  std::size_t build(std::size_t depth, std::vector<bool>& nominal_used, std::vector<double>& lo,
                    std::vector<double>& hi) {
    const std::size_t id = nodes_.size();
    nodes_.emplace_back();
    if (depth >= max_depth_ || (depth >= kFirstLeafLevel && rng().bernoulli(kLeafFraction))) {
      nodes_[id].label = static_cast<ClassId>(rng().below(2));
      return id;
    }

    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < kNumeric; ++i) candidates.push_back(i);
    for (std::size_t i = 0; i < kNominal; ++i)
      if (!nominal_used[i]) candidates.push_back(kNumeric + i);
    const std::size_t attr = candidates[rng().below(candidates.size())];

    nodes_[id].leaf = false;
    nodes_[id].attribute = attr;
    std::vector<std::size_t> children;
    if (attr < kNumeric) {
      const double split = rng().uniform(lo[attr], hi[attr]);
      nodes_[id].split = split;
      const double saved_hi = hi[attr];
      hi[attr] = split;
      children.push_back(build(depth + 1, nominal_used, lo, hi));
      hi[attr] = saved_hi;
      const double saved_lo = lo[attr];
      lo[attr] = split;
      children.push_back(build(depth + 1, nominal_used, lo, hi));
      lo[attr] = saved_lo;
    } else {
      nominal_used[attr - kNumeric] = true;
      for (std::size_t v = 0; v < kValues; ++v)
        children.push_back(build(depth + 1, nominal_used, lo, hi));
      nominal_used[attr - kNumeric] = false;
    }
    nodes_[id].children = std::move(children);
    return id;
  }

  ClassId generate(std::vector<RawValue>& raw) override {
    std::array<double, kNumeric> num{};
    std::array<std::size_t, kNominal> nom{};
    for (double& v : num) v = rng().uniform();
    for (std::size_t& v : nom) v = static_cast<std::size_t>(rng().below(kValues));
    for (double v : num) raw.emplace_back(v);
    for (std::size_t v : nom) raw.emplace_back(Category{v});

    std::size_t node = 0;
    while (!nodes_[node].leaf) {
      const Node& n = nodes_[node];
      if (n.attribute < kNumeric)
        node = n.children[num[n.attribute] < n.split ? 0 : 1];
      else
        node = n.children[nom[n.attribute - kNumeric]];
    }
    ClassId label = nodes_[node].label;
    if (rng().bernoulli(noise_)) label = flip_binary(label);
    return label;
  }

  double noise_;
  std::size_t max_depth_;
  std::vector<Node> nodes_;
};

// Three classes; each mixes two of three triangular base waves with a uniform
// weight and adds standard normal noise to all 21 attributes.
class WaveformGenerator final : public GeneratorBase {
 public:
  static constexpr std::size_t kDims = 21;

  explicit WaveformGenerator(const GeneratorConfig& c)
      : GeneratorBase(StreamSchema(numeric_attributes(kDims), 3), c.seed) {
    if (c.noise) throw DomainError("waveform noise is fixed");
  }

 private:
  static constexpr std::array<std::array<double, kDims>, 3> kWaves{{
      {0, 1, 2, 3, 4, 5, 6, 5, 4, 3, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0},
      {0, 0, 0, 0, 0, 1, 2, 3, 4, 5, 6, 5, 4, 3, 2, 1, 0, 0, 0, 0, 0},
      {0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 2, 3, 4, 5, 6, 5, 4, 3, 2, 1, 0},
  }};
  static constexpr std::array<std::array<std::size_t, 2>, 3> kPairs{{{0, 1}, {0, 2}, {1, 2}}};

  ClassId generate(std::vector<RawValue>& raw) override {
    const auto label = static_cast<ClassId>(rng().below(3));
    const double mix = rng().uniform();
    const auto& a = kWaves[kPairs[label][0]];
    const auto& b = kWaves[kPairs[label][1]];
    for (std::size_t i = 0; i < kDims; ++i)
      raw.emplace_back(mix * a[i] + (1.0 - mix) * b[i] + rng().normal());
    return label;
  }
};

// Two classes. Informative dimensions are N(-1, 1) for class 0 and N(+1, 1)
// for class 1; noise dimensions are N(0, 3^2) for both.
class GaussianGenerator final : public GeneratorBase {
 public:
  static constexpr double kNoiseStddev = 3.0;

  explicit GaussianGenerator(const GeneratorConfig& c)
      : GeneratorBase(StreamSchema(make_attributes(c), 2), c.seed),
        informative_(c.informative_dims.value_or(2)),
        noise_dims_(c.noise_dims.value_or(8)),
        noise_(checked_probability(c.noise, 0.0, "noise")) {}

 private:
  static std::vector<Attribute> make_attributes(const GeneratorConfig& c) {
    const std::size_t inf = c.informative_dims.value_or(2);
    const std::size_t noise = c.noise_dims.value_or(8);
    if (inf < 1) throw DomainError("informative_dims must be positive");
    auto attrs = numeric_attributes(inf, "inf");
    auto rest = numeric_attributes(noise, "noise");
    attrs.insert(attrs.end(), rest.begin(), rest.end());
    return attrs;
  }

  ClassId generate(std::vector<RawValue>& raw) override {
    const auto label = static_cast<ClassId>(rng().below(2));
    const double mean = label == 0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < informative_; ++i) raw.emplace_back(rng().normal(mean, 1.0));
    for (std::size_t i = 0; i < noise_dims_; ++i) raw.emplace_back(rng().normal(0.0, kNoiseStddev));
    return rng().bernoulli(noise_) ? flip_binary(label) : label;
  }

  std::size_t informative_;
  std::size_t noise_dims_;
  double noise_;
};

}  // namespace

std::string_view to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::Sea: return "sea";
    case GeneratorKind::Hyperplane: return "hyperplane";
    case GeneratorKind::RandomRbf: return "rbf";
    case GeneratorKind::RandomTree: return "tree";
    case GeneratorKind::Waveform: return "waveform";
    case GeneratorKind::Gaussian: return "gaussian";
  }
  return "unknown";
}

std::optional<GeneratorKind> parse_generator_kind(std::string_view name) {
  for (auto kind : {GeneratorKind::Sea, GeneratorKind::Hyperplane, GeneratorKind::RandomRbf,
                    GeneratorKind::RandomTree, GeneratorKind::Waveform, GeneratorKind::Gaussian})
    if (to_string(kind) == name) return kind;
  return std::nullopt;
}

ClassId sea_concept(double x1, double x2, double threshold) {
  return x1 + x2 <= threshold ? 0 : 1;
}

std::unique_ptr<InstanceSource> make_generator(const GeneratorConfig& config) {
  switch (config.kind) {
    case GeneratorKind::Sea: return std::make_unique<SeaGenerator>(config);
    case GeneratorKind::Hyperplane: return std::make_unique<HyperplaneGenerator>(config);
    case GeneratorKind::RandomRbf: return std::make_unique<RandomRbfGenerator>(config);
    case GeneratorKind::RandomTree: return std::make_unique<RandomTreeGenerator>(config);
    case GeneratorKind::Waveform: return std::make_unique<WaveformGenerator>(config);
    case GeneratorKind::Gaussian: return std::make_unique<GaussianGenerator>(config);
  }
  throw DomainError("unknown generator kind");
}

}  // namespace okiss
