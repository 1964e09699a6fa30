#pragma once

#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "okiss/generators.hpp"
#include "okiss/schema.hpp"

namespace okiss {

/// Reads labelled instances from a comma-separated file with a header line.
///
/// Schema attributes are matched to header columns by name, so a schema
/// listing a subset of the columns selects that subset (in schema order).
/// The class comes from `class_column`, or from the last column if unset.
/// Numerics use '.' as the decimal point; nominal and class tokens must be
/// declared in the schema. Errors carry the 1-based line number.
class CsvInstanceReader final : public InstanceSource {
 public:
  CsvInstanceReader(const std::string& path, StreamSchema schema,
                    std::optional<std::string> class_column = std::nullopt);

  const StreamSchema& schema() const override { return schema_; }
  std::optional<Instance> next() override;

 private:
  std::ifstream in_;
  StreamSchema schema_;
  std::vector<std::size_t> attribute_columns_;
  std::size_t class_column_ = 0;
  std::size_t num_columns_ = 0;
  std::size_t line_no_ = 1;
  std::uint64_t arrival_ = 0;
};

/// Reads the whole file.
std::vector<Instance> load_csv(const std::string& path, const StreamSchema& schema,
                               std::optional<std::string> class_column = std::nullopt);

/// Writes instances in the format CsvInstanceReader reads: a header of
/// attribute names plus "class", numerics at full precision.
void write_instances_csv(std::ostream& out, const StreamSchema& schema,
                         const std::vector<Instance>& instances);

/// The schema in the key=value format StreamSchema::parse reads.
std::string schema_text(const StreamSchema& schema);

}  // namespace okiss
