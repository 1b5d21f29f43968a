#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reductminer/attribute_set.hpp"
#include "reductminer/errors.hpp"

namespace reductminer {

enum class AttributeKind { Discrete, Continuous, Categorical, Binary };

const char* to_string(AttributeKind kind);
AttributeKind attribute_kind_from_string(const std::string& s);

/// Per-column metadata. Categorical/binary columns carry a value
/// dictionary (code = position, assigned in first-appearance order);
/// numeric columns don't. A column produced by apply_binning keeps its
/// cut points in bin_cuts so downstream rule extraction can render
/// interval conditions.
struct AttributeDescriptor {
    std::string name;
    AttributeKind kind = AttributeKind::Discrete;
    std::vector<std::string> dictionary;
    int index = 0;
    std::vector<double> bin_cuts;

    bool has_dictionary() const {
        return kind == AttributeKind::Categorical || kind == AttributeKind::Binary;
    }
    bool is_numeric() const {
        return kind == AttributeKind::Discrete || kind == AttributeKind::Continuous;
    }
    bool is_binned() const { return !bin_cuts.empty(); }

    /// Text form of a stored cell value (dictionary lookup or decimal).
    std::string decode(std::int64_t value) const;

    void validate() const;
};

/// Ascending cut points defining |cuts|+1 left-open right-closed bins:
/// bin 0 is (-inf, c0], bin k is (c[k-1], c[k]], the last bin is open above.
struct BinningSpec {
    std::string attribute;
    std::vector<double> cut_points;

    BinningSpec(std::string attribute_name, std::vector<double> cuts);

    int bin_count() const { return static_cast<int>(cut_points.size()) + 1; }
    int bin_of(std::int64_t value) const;

    /// Bounds of a bin as (lower, upper); unbounded sides are nullopt.
    std::pair<std::optional<double>, std::optional<double>> bin_bounds(int bin) const;
};

/// Columnar, integer-encoded table: conditional attributes plus one
/// decision attribute. Immutable after construction; all engine
/// operations are pure reads.
class InformationSystem {
public:
    InformationSystem(std::vector<AttributeDescriptor> attributes,
                      std::vector<std::vector<std::int64_t>> columns,
                      AttributeDescriptor decision,
                      std::vector<std::int64_t> decision_column);

    std::size_t row_count() const { return row_count_; }
    int attribute_count() const { return static_cast<int>(attributes_.size()); }

    const std::vector<AttributeDescriptor>& attributes() const { return attributes_; }
    const AttributeDescriptor& attribute(int index) const { return attributes_.at(index); }
    const AttributeDescriptor& decision() const { return decision_; }

    /// Index of a conditional attribute by name; throws InputError if absent.
    int attribute_index(const std::string& name) const;
    bool has_attribute(const std::string& name) const;

    const std::vector<std::int64_t>& column(int index) const { return columns_.at(index); }
    std::int64_t value(std::size_t row, int attribute) const {
        return columns_[attribute][row];
    }

    const std::vector<std::int64_t>& decision_column() const { return decision_column_; }
    std::int64_t decision_value(std::size_t row) const { return decision_column_[row]; }

    int class_count() const { return static_cast<int>(decision_.dictionary.size()); }
    const std::string& class_label(std::int64_t code) const;
    /// Decision code for a label, or -1 when the label is not present.
    std::int64_t class_code(const std::string& label) const;

    /// Per-class record counts over the whole universe.
    std::vector<std::int64_t> class_distribution() const;

    AttributeSet all_attributes() const {
        return AttributeSet::full(attribute_count());
    }

private:
    std::vector<AttributeDescriptor> attributes_;
    std::vector<std::vector<std::int64_t>> columns_;
    AttributeDescriptor decision_;
    std::vector<std::int64_t> decision_column_;
    std::size_t row_count_ = 0;
};

/// Optional explicit schema for load_csv. Attribute kinds may be forced
/// per column name; the decision column defaults to the last one.
struct Schema {
    std::optional<std::string> decision;
    std::map<std::string, AttributeKind> kinds;
};

struct LoadOptions {
    char delimiter = ';';
    std::optional<Schema> schema;
};

/// Loads delimiter-separated text with a header row into an
/// InformationSystem. Columns whose every cell parses as a 64-bit
/// integer become numeric (Discrete unless the schema says Continuous);
/// everything else is dictionary-encoded in first-appearance order.
/// The decision column is always dictionary-encoded.
InformationSystem load_csv(const std::string& path, const LoadOptions& options = {});
InformationSystem load_csv_text(std::string_view text, const LoadOptions& options = {},
                                const std::string& origin = "<memory>");

/// Returns a new system with each spec'd numeric attribute replaced by
/// its bin-index column (kind Discrete, cut points recorded).
InformationSystem apply_binning(const InformationSystem& table,
                                const std::vector<BinningSpec>& specs);

struct AttributeSummary {
    std::string name;
    AttributeKind kind = AttributeKind::Discrete;
    std::int64_t distinct = 0;
    std::optional<std::int64_t> min;
    std::optional<std::int64_t> max;
    std::vector<std::string> dictionary;
};

struct DatasetSummary {
    std::size_t rows = 0;
    std::vector<AttributeSummary> attributes;
    std::string decision_name;
    AttributeKind decision_kind = AttributeKind::Binary;
    std::vector<std::pair<std::string, std::int64_t>> class_distribution;
};

DatasetSummary describe(const InformationSystem& table);

/// Parses a schema document: {"decision": "name", "kinds": {"col": "continuous", ...}}.
Schema schema_from_json(const std::string& text);
Schema schema_from_file(const std::string& path);

/// Parses a binning document: {"attribute": [cut, cut, ...], ...}.
std::vector<BinningSpec> binning_specs_from_json(const std::string& text);
std::vector<BinningSpec> binning_specs_from_file(const std::string& path);

}  // namespace reductminer
