#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "okiss/metric.hpp"

namespace okiss {

using ClassId = std::size_t;

/// Index into a nominal attribute's category list.
struct Category {
  std::size_t index = 0;
  friend bool operator==(const Category&, const Category&) = default;
};

using RawValue = std::variant<double, Category>;

enum class AttributeKind { Numeric, Nominal };

struct Attribute {
  std::string name;
  AttributeKind kind = AttributeKind::Numeric;
  std::vector<std::string> categories;  // nominal only

  static Attribute numeric(std::string name);
  static Attribute nominal(std::string name, std::vector<std::string> categories);

  /// Width of this attribute in the encoded vector.
  std::size_t encoded_width() const {
    return kind == AttributeKind::Numeric ? 1 : categories.size();
  }
  std::optional<std::size_t> category_index(std::string_view value) const;
};

/// How raw class tokens map to class ids when loading labelled files.
struct ClassMapping {
  std::vector<std::string> labels;
  // When set, this token is class 0 and every other token is class 1.
  std::optional<std::string> binary_negative;

  std::optional<ClassId> resolve(std::string_view token) const;
};

class StreamSchema {
 public:
  StreamSchema(std::vector<Attribute> attributes, ClassMapping classes);
  StreamSchema(std::vector<Attribute> attributes, std::size_t num_classes);

  const std::vector<Attribute>& attributes() const { return attributes_; }
  const ClassMapping& classes() const { return classes_; }
  std::size_t num_classes() const { return classes_.labels.size(); }
  std::size_t encoded_dim() const { return encoded_dim_; }

  /// Parses the key=value schema format:
  ///   name=numeric
  ///   name=nominal:cat1|cat2|...
  ///   @class=nominal:label1|label2|...   or   @class=binary:<negative label>
  /// Blank lines and lines starting with '#' are ignored.
  static StreamSchema parse(std::istream& in);
  static StreamSchema load(const std::string& path);

 private:
  std::vector<Attribute> attributes_;
  ClassMapping classes_;
  std::size_t encoded_dim_ = 0;
};

/// Numerics verbatim, each nominal expanded to a one-hot block.
FeatureVector encode(const std::vector<RawValue>& raw, const StreamSchema& schema);

struct Instance {
  std::vector<RawValue> raw;
  FeatureVector encoded;
  ClassId label = 0;
  std::uint64_t arrival_index = 0;
};

/// Builds an Instance, encoding `raw` and validating the label.
Instance make_instance(std::vector<RawValue> raw, ClassId label, std::uint64_t arrival_index,
                       const StreamSchema& schema);

/// Throws StructuralError unless `inst` matches the schema's dimension and class count.
void check_compatible(const Instance& inst, const StreamSchema& schema);

}  // namespace okiss
