#include "okiss/csv_loader.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string_view>

namespace okiss {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> parse_number(std::string_view token) {
  if (token.empty()) return std::nullopt;
  if (token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value))
    return std::nullopt;
  return value;
}

}  // namespace

CsvInstanceReader::CsvInstanceReader(const std::string& path, StreamSchema schema,
                                     std::optional<std::string> class_column)
    : in_(path), schema_(std::move(schema)) {
  if (!in_) throw Error("cannot open CSV file: " + path);
  std::string header;
  if (!std::getline(in_, header)) throw ParseError(1, "missing header line");
  const auto names = split_fields(header);
  num_columns_ = names.size();

  auto column_of = [&names](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    return std::nullopt;
  };

  if (class_column) {
    const auto idx = column_of(*class_column);
    if (!idx) throw ParseError(1, "class column '" + *class_column + "' not in header");
    class_column_ = *idx;
  } else {
    class_column_ = num_columns_ - 1;
  }
  for (const auto& attr : schema_.attributes()) {
    const auto idx = column_of(attr.name);
    if (!idx) throw ParseError(1, "schema attribute '" + attr.name + "' not in header");
    if (*idx == class_column_) throw ParseError(1, "attribute '" + attr.name + "' is the class column");
    attribute_columns_.push_back(*idx);
  }
}

std::optional<Instance> CsvInstanceReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (trim(line).empty()) continue;

    const auto fields = split_fields(line);
    if (fields.size() != num_columns_)
      throw ParseError(line_no_, "expected " + std::to_string(num_columns_) + " fields, got " +
                                     std::to_string(fields.size()));

    const auto& attrs = schema_.attributes();
    std::vector<RawValue> raw;
    raw.reserve(attrs.size());
    for (std::size_t i = 0; i < attrs.size(); ++i) {
      const auto token = fields[attribute_columns_[i]];
      if (attrs[i].kind == AttributeKind::Numeric) {
        const auto value = parse_number(token);
        if (!value)
          throw ParseError(line_no_, "non-numeric value '" + std::string(token) + "' for " +
                                         attrs[i].name);
        raw.emplace_back(*value);
      } else {
        const auto idx = attrs[i].category_index(token);
        if (!idx)
          throw ParseError(line_no_, "unknown category '" + std::string(token) + "' for " +
                                         attrs[i].name);
        raw.emplace_back(Category{*idx});
      }
    }
    const auto label = schema_.classes().resolve(fields[class_column_]);
    if (!label)
      throw ParseError(line_no_, "unknown class label '" + std::string(fields[class_column_]) + "'");
    return make_instance(std::move(raw), *label, arrival_++, schema_);
  }
  if (in_.bad()) throw Error("read error");
  return std::nullopt;
}

std::vector<Instance> load_csv(const std::string& path, const StreamSchema& schema,
                               std::optional<std::string> class_column) {
  CsvInstanceReader reader(path, schema, std::move(class_column));
  std::vector<Instance> out;
  while (auto inst = reader.next()) out.push_back(std::move(*inst));
  return out;
}

void write_instances_csv(std::ostream& out, const StreamSchema& schema,
                         const std::vector<Instance>& instances) {
  const auto& attrs = schema.attributes();
  for (const auto& a : attrs) out << a.name << ',';
  out << "class\n";
  char buf[64];
  for (const auto& inst : instances) {
    for (std::size_t i = 0; i < attrs.size(); ++i) {
      if (const auto* v = std::get_if<double>(&inst.raw[i])) {
        std::snprintf(buf, sizeof buf, "%.17g", *v);
        out << buf;
      } else {
        out << attrs[i].categories.at(std::get<Category>(inst.raw[i]).index);
      }
      out << ',';
    }
    out << schema.classes().labels.at(inst.label) << '\n';
  }
}

std::string schema_text(const StreamSchema& schema) {
  std::ostringstream out;
  auto join = [](const std::vector<std::string>& items) {
    std::string s;
    for (std::size_t i = 0; i < items.size(); ++i) s += (i ? "|" : "") + items[i];
    return s;
  };
  for (const auto& a : schema.attributes()) {
    out << a.name << '=';
    if (a.kind == AttributeKind::Numeric)
      out << "numeric\n";
    else
      out << "nominal:" << join(a.categories) << '\n';
  }
  if (schema.classes().binary_negative)
    out << "@class=binary:" << *schema.classes().binary_negative << '\n';
  else
    out << "@class=nominal:" << join(schema.classes().labels) << '\n';
  return out.str();
}

}  // namespace okiss
