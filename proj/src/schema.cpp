#include "okiss/schema.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace okiss {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_categories(std::string_view list, std::size_t line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto bar = list.find('|', start);
    const auto item = trim(list.substr(start, bar == std::string_view::npos ? bar : bar - start));
    if (item.empty()) throw ParseError(line, "empty category name");
    out.emplace_back(item);
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  auto sorted = out;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ParseError(line, "duplicate category name");
  return out;
}

}  // namespace

Attribute Attribute::numeric(std::string name) {
  return Attribute{std::move(name), AttributeKind::Numeric, {}};
}

Attribute Attribute::nominal(std::string name, std::vector<std::string> categories) {
  if (categories.empty()) throw StructuralError("nominal attribute needs categories: " + name);
  return Attribute{std::move(name), AttributeKind::Nominal, std::move(categories)};
}

std::optional<std::size_t> Attribute::category_index(std::string_view value) const {
  const auto it = std::find(categories.begin(), categories.end(), value);
  if (it == categories.end()) return std::nullopt;
  return static_cast<std::size_t>(it - categories.begin());
}

std::optional<ClassId> ClassMapping::resolve(std::string_view token) const {
  if (binary_negative) {
    // KDD-style labels carry a trailing period ("normal.").
    std::string_view bare = token;
    if (!bare.empty() && bare.back() == '.') bare.remove_suffix(1);
    return (token == *binary_negative || bare == *binary_negative) ? 0 : 1;
  }
  const auto it = std::find(labels.begin(), labels.end(), token);
  if (it == labels.end()) return std::nullopt;
  return static_cast<ClassId>(it - labels.begin());
}

StreamSchema::StreamSchema(std::vector<Attribute> attributes, ClassMapping classes)
    : attributes_(std::move(attributes)), classes_(std::move(classes)) {
  for (const auto& a : attributes_) encoded_dim_ += a.encoded_width();
  if (encoded_dim_ < 1) throw StructuralError("schema encodes to zero dimensions");
  if (classes_.labels.size() < 2) throw StructuralError("schema needs at least two classes");
}

StreamSchema::StreamSchema(std::vector<Attribute> attributes, std::size_t num_classes)
    : StreamSchema(std::move(attributes), [num_classes] {
        ClassMapping m;
        for (std::size_t c = 0; c < num_classes; ++c) m.labels.push_back(std::to_string(c));
        return m;
      }()) {}

StreamSchema StreamSchema::parse(std::istream& in) {
  std::vector<Attribute> attributes;
  std::optional<ClassMapping> classes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key=value");
    const auto key = trim(text.substr(0, eq));
    const auto value = trim(text.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "empty key");

    if (key == "@class") {
      if (classes) throw ParseError(line_no, "duplicate @class");
      ClassMapping m;
      if (value.starts_with("nominal:")) {
        m.labels = split_categories(value.substr(8), line_no);
      } else if (value.starts_with("binary:")) {
        const auto negative = trim(value.substr(7));
        if (negative.empty()) throw ParseError(line_no, "binary class needs a negative label");
        m.binary_negative = std::string(negative);
        m.labels = {std::string(negative), "other"};
      } else {
        throw ParseError(line_no, "@class must be nominal:<labels> or binary:<label>");
      }
      classes = std::move(m);
    } else if (value == "numeric") {
      attributes.push_back(Attribute::numeric(std::string(key)));
    } else if (value.starts_with("nominal:")) {
      attributes.push_back(
          Attribute::nominal(std::string(key), split_categories(value.substr(8), line_no)));
    } else {
      throw ParseError(line_no, "unknown attribute type '" + std::string(value) + "'");
    }
  }
  if (!classes) throw ParseError(line_no, "schema has no @class declaration");
  try {
    return StreamSchema(std::move(attributes), std::move(*classes));
  } catch (const StructuralError& e) {
    throw ParseError(line_no, e.what());
  }
}

StreamSchema StreamSchema::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open schema file: " + path);
  return parse(in);
}

FeatureVector encode(const std::vector<RawValue>& raw, const StreamSchema& schema) {
  const auto& attrs = schema.attributes();
  if (raw.size() != attrs.size()) throw StructuralError("attribute count does not match schema");

  FeatureVector out = FeatureVector::Zero(static_cast<Eigen::Index>(schema.encoded_dim()));
  Eigen::Index pos = 0;
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    const auto& attr = attrs[i];
    if (attr.kind == AttributeKind::Numeric) {
      const auto* v = std::get_if<double>(&raw[i]);
      if (!v) throw StructuralError("expected numeric value for " + attr.name);
      out(pos++) = *v;
    } else {
      const auto* c = std::get_if<Category>(&raw[i]);
      if (!c) throw StructuralError("expected nominal value for " + attr.name);
      if (c->index >= attr.categories.size())
        throw StructuralError("unknown category for " + attr.name);
      out(pos + static_cast<Eigen::Index>(c->index)) = 1.0;
      pos += static_cast<Eigen::Index>(attr.categories.size());
    }
  }
  return out;
}

Instance make_instance(std::vector<RawValue> raw, ClassId label, std::uint64_t arrival_index,
                       const StreamSchema& schema) {
  if (label >= schema.num_classes()) throw StructuralError("class label out of range");
  Instance inst;
  inst.encoded = encode(raw, schema);
  inst.raw = std::move(raw);
  inst.label = label;
  inst.arrival_index = arrival_index;
  return inst;
}

void check_compatible(const Instance& inst, const StreamSchema& schema) {
  if (static_cast<std::size_t>(inst.encoded.size()) != schema.encoded_dim())
    throw StructuralError("instance dimension does not match schema");
  if (inst.label >= schema.num_classes()) throw StructuralError("class label out of range");
}

}  // namespace okiss
