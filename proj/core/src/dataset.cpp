#include "reductminer/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace reductminer {

const char* to_string(AttributeKind kind) {
    switch (kind) {
        case AttributeKind::Discrete: return "discrete";
        case AttributeKind::Continuous: return "continuous";
        case AttributeKind::Categorical: return "categorical";
        case AttributeKind::Binary: return "binary";
    }
    return "?";
}

AttributeKind attribute_kind_from_string(const std::string& s) {
    if (s == "discrete") return AttributeKind::Discrete;
    if (s == "continuous") return AttributeKind::Continuous;
    if (s == "categorical") return AttributeKind::Categorical;
    if (s == "binary") return AttributeKind::Binary;
    throw InputError("unknown attribute kind: " + s);
}

std::string AttributeDescriptor::decode(std::int64_t value) const {
    if (has_dictionary()) {
        if (value < 0 || value >= static_cast<std::int64_t>(dictionary.size()))
            throw std::out_of_range("dictionary code " + std::to_string(value) +
                                    " out of range for attribute " + name);
        return dictionary[static_cast<std::size_t>(value)];
    }
    return std::to_string(value);
}

void AttributeDescriptor::validate() const {
    const bool needs_dict = has_dictionary();
    if (needs_dict && dictionary.empty())
        throw std::invalid_argument("attribute " + name + " is " +
                                    to_string(kind) + " but has no dictionary");
    if (!needs_dict && !dictionary.empty())
        throw std::invalid_argument("attribute " + name + " is " +
                                    to_string(kind) + " but carries a dictionary");
    if (kind == AttributeKind::Binary && dictionary.size() != 2)
        throw std::invalid_argument("binary attribute " + name + " must have exactly 2 values");
    std::unordered_set<std::string> seen;
    for (const auto& v : dictionary)
        if (!seen.insert(v).second)
            throw std::invalid_argument("duplicate dictionary entry '" + v +
                                        "' in attribute " + name);
}

BinningSpec::BinningSpec(std::string attribute_name, std::vector<double> cuts)
    : attribute(std::move(attribute_name)), cut_points(std::move(cuts)) {
    if (cut_points.empty())
        throw std::invalid_argument("binning spec for " + attribute +
                                    " needs at least one cut point");
    for (std::size_t i = 1; i < cut_points.size(); ++i)
        if (!(cut_points[i - 1] < cut_points[i]))
            throw std::invalid_argument("cut points for " + attribute +
                                        " must be strictly ascending");
}

int BinningSpec::bin_of(std::int64_t value) const {
    // Left-open right-closed: bin k holds cut[k-1] < v <= cut[k].
    auto it = std::lower_bound(cut_points.begin(), cut_points.end(),
                               static_cast<double>(value));
    return static_cast<int>(it - cut_points.begin());
}

std::pair<std::optional<double>, std::optional<double>> BinningSpec::bin_bounds(int bin) const {
    std::optional<double> lo, hi;
    if (bin > 0) lo = cut_points[static_cast<std::size_t>(bin - 1)];
    if (bin < static_cast<int>(cut_points.size())) hi = cut_points[static_cast<std::size_t>(bin)];
    return {lo, hi};
}

InformationSystem::InformationSystem(std::vector<AttributeDescriptor> attributes,
                                     std::vector<std::vector<std::int64_t>> columns,
                                     AttributeDescriptor decision,
                                     std::vector<std::int64_t> decision_column)
    : attributes_(std::move(attributes)),
      columns_(std::move(columns)),
      decision_(std::move(decision)),
      decision_column_(std::move(decision_column)) {
    if (attributes_.size() != columns_.size())
        throw std::invalid_argument("attribute/column count mismatch");
    if (attributes_.size() > AttributeSet::kCapacity)
        throw InputError("too many conditional attributes (max " +
                         std::to_string(AttributeSet::kCapacity) + ")");
    row_count_ = decision_column_.size();
    if (row_count_ == 0)
        throw InputError("empty universe: table has no rows");

    std::unordered_set<std::string> names;
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
        attributes_[i].index = static_cast<int>(i);
        attributes_[i].validate();
        if (!names.insert(attributes_[i].name).second)
            throw std::invalid_argument("duplicate attribute name: " + attributes_[i].name);
        if (columns_[i].size() != row_count_)
            throw std::invalid_argument("column length mismatch for " + attributes_[i].name);
    }
    decision_.validate();
    if (!decision_.has_dictionary())
        throw std::invalid_argument("decision attribute must be dictionary-encoded");
    if (names.count(decision_.name))
        throw std::invalid_argument("decision attribute " + decision_.name +
                                    " also appears in the conditional set");

    for (std::size_t i = 0; i < attributes_.size(); ++i) {
        if (!attributes_[i].has_dictionary()) continue;
        const auto size = static_cast<std::int64_t>(attributes_[i].dictionary.size());
        for (std::int64_t v : columns_[i])
            if (v < 0 || v >= size)
                throw std::invalid_argument("cell value outside dictionary for " +
                                            attributes_[i].name);
    }
    const auto classes = static_cast<std::int64_t>(decision_.dictionary.size());
    for (std::int64_t v : decision_column_)
        if (v < 0 || v >= classes)
            throw std::invalid_argument("decision value outside dictionary");
}

int InformationSystem::attribute_index(const std::string& name) const {
    for (const auto& a : attributes_)
        if (a.name == name) return a.index;
    throw InputError("unknown attribute: " + name);
}

bool InformationSystem::has_attribute(const std::string& name) const {
    for (const auto& a : attributes_)
        if (a.name == name) return true;
    return false;
}

const std::string& InformationSystem::class_label(std::int64_t code) const {
    if (code < 0 || code >= static_cast<std::int64_t>(decision_.dictionary.size()))
        throw std::out_of_range("decision code out of range");
    return decision_.dictionary[static_cast<std::size_t>(code)];
}

std::int64_t InformationSystem::class_code(const std::string& label) const {
    for (std::size_t i = 0; i < decision_.dictionary.size(); ++i)
        if (decision_.dictionary[i] == label) return static_cast<std::int64_t>(i);
    return -1;
}

std::vector<std::int64_t> InformationSystem::class_distribution() const {
    std::vector<std::int64_t> counts(decision_.dictionary.size(), 0);
    for (std::int64_t v : decision_column_) ++counts[static_cast<std::size_t>(v)];
    return counts;
}

namespace {

// One cell as written in the file (quotes already stripped).
using Token = std::string_view;

bool parse_int64(Token token, std::int64_t& out) {
    if (token.empty()) return false;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

Token strip_cell(Token cell) {
    if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"')
        cell = cell.substr(1, cell.size() - 2);
    return cell;
}

struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<Token>> rows;  // views into the caller's buffer
};

RawTable tokenize(std::string_view text, char delimiter, const std::string& origin) {
    RawTable raw;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos <= text.size()) {
        if (pos == text.size()) break;
        std::size_t eol = text.find('\n', pos);
        std::string_view line = eol == std::string_view::npos
                                    ? text.substr(pos)
                                    : text.substr(pos, eol - pos);
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        if (line.empty()) continue;

        std::vector<Token> cells;
        std::size_t start = 0;
        while (true) {
            std::size_t sep = line.find(delimiter, start);
            std::string_view cell = sep == std::string_view::npos
                                        ? line.substr(start)
                                        : line.substr(start, sep - start);
            cells.push_back(strip_cell(cell));
            if (sep == std::string_view::npos) break;
            start = sep + 1;
        }

        if (raw.header.empty()) {
            raw.header.reserve(cells.size());
            for (Token c : cells) raw.header.emplace_back(c);
        } else {
            if (cells.size() != raw.header.size())
                throw InputError(origin + ": row " + std::to_string(line_no) +
                                 " has " + std::to_string(cells.size()) +
                                 " fields, expected " + std::to_string(raw.header.size()));
            raw.rows.push_back(std::move(cells));
        }
    }
    if (raw.header.empty()) throw InputError(origin + ": empty file");
    if (raw.rows.empty()) throw InputError(origin + ": empty universe (header only)");
    return raw;
}

struct ColumnBuild {
    AttributeDescriptor descriptor;
    std::vector<std::int64_t> values;
};

ColumnBuild encode_dictionary_column(const RawTable& raw, std::size_t col,
                                     const std::string& name) {
    ColumnBuild out;
    out.descriptor.name = name;
    out.values.reserve(raw.rows.size());
    std::unordered_map<std::string_view, std::int64_t> codes;
    for (const auto& row : raw.rows) {
        Token cell = row[col];
        auto [it, inserted] = codes.try_emplace(cell, static_cast<std::int64_t>(codes.size()));
        if (inserted) out.descriptor.dictionary.emplace_back(cell);
        out.values.push_back(it->second);
    }
    out.descriptor.kind = out.descriptor.dictionary.size() == 2 ? AttributeKind::Binary
                                                                : AttributeKind::Categorical;
    return out;
}

ColumnBuild encode_numeric_column(const RawTable& raw, std::size_t col,
                                  const std::string& name, AttributeKind kind,
                                  const std::string& origin) {
    ColumnBuild out;
    out.descriptor.name = name;
    out.descriptor.kind = kind;
    out.values.reserve(raw.rows.size());
    for (std::size_t r = 0; r < raw.rows.size(); ++r) {
        std::int64_t v;
        if (!parse_int64(raw.rows[r][col], v))
            throw InputError(origin + ": row " + std::to_string(r + 2) + ", column '" +
                             name + "': cannot parse '" + std::string(raw.rows[r][col]) +
                             "' as an integer");
        out.values.push_back(v);
    }
    return out;
}

bool column_is_numeric(const RawTable& raw, std::size_t col) {
    std::int64_t v;
    for (const auto& row : raw.rows)
        if (!parse_int64(row[col], v)) return false;
    return true;
}

}  // namespace

InformationSystem load_csv_text(std::string_view text, const LoadOptions& options,
                                const std::string& origin) {
    RawTable raw = tokenize(text, options.delimiter, origin);

    std::size_t decision_col = raw.header.size() - 1;
    if (options.schema && options.schema->decision) {
        const std::string& want = *options.schema->decision;
        auto it = std::find(raw.header.begin(), raw.header.end(), want);
        if (it == raw.header.end())
            throw InputError(origin + ": decision column '" + want + "' not in header");
        decision_col = static_cast<std::size_t>(it - raw.header.begin());
    }

    std::vector<AttributeDescriptor> attributes;
    std::vector<std::vector<std::int64_t>> columns;
    for (std::size_t c = 0; c < raw.header.size(); ++c) {
        if (c == decision_col) continue;
        const std::string& name = raw.header[c];

        std::optional<AttributeKind> forced;
        if (options.schema) {
            auto it = options.schema->kinds.find(name);
            if (it != options.schema->kinds.end()) forced = it->second;
        }

        ColumnBuild built;
        if (forced && (*forced == AttributeKind::Categorical || *forced == AttributeKind::Binary)) {
            built = encode_dictionary_column(raw, c, name);
            if (*forced == AttributeKind::Binary && built.descriptor.dictionary.size() != 2)
                throw InputError(origin + ": column '" + name + "' declared binary but has " +
                                 std::to_string(built.descriptor.dictionary.size()) +
                                 " distinct values");
            built.descriptor.kind = *forced;
        } else if (forced) {
            built = encode_numeric_column(raw, c, name, *forced, origin);
        } else if (column_is_numeric(raw, c)) {
            built = encode_numeric_column(raw, c, name, AttributeKind::Discrete, origin);
        } else {
            built = encode_dictionary_column(raw, c, name);
        }
        attributes.push_back(std::move(built.descriptor));
        columns.push_back(std::move(built.values));
    }

    // The decision column is always label-encoded, whatever it looks like.
    ColumnBuild decision = encode_dictionary_column(raw, decision_col, raw.header[decision_col]);
    return InformationSystem(std::move(attributes), std::move(columns),
                             std::move(decision.descriptor), std::move(decision.values));
}

InformationSystem load_csv(const std::string& path, const LoadOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();
    return load_csv_text(text, options, path);
}

InformationSystem apply_binning(const InformationSystem& table,
                                const std::vector<BinningSpec>& specs) {
    std::vector<AttributeDescriptor> attributes = table.attributes();
    std::vector<std::vector<std::int64_t>> columns;
    columns.reserve(attributes.size());
    for (int i = 0; i < table.attribute_count(); ++i) columns.push_back(table.column(i));

    for (const auto& spec : specs) {
        if (spec.attribute == table.decision().name)
            throw InputError("cannot bin the decision attribute " + spec.attribute);
        int idx = table.attribute_index(spec.attribute);
        const AttributeDescriptor& desc = table.attribute(idx);
        if (!desc.is_numeric())
            throw InputError(std::string("cannot bin ") + to_string(desc.kind) +
                             " attribute " + spec.attribute);

        std::vector<std::int64_t> binned;
        binned.reserve(table.row_count());
        for (std::int64_t v : table.column(idx)) binned.push_back(spec.bin_of(v));
        columns[static_cast<std::size_t>(idx)] = std::move(binned);

        AttributeDescriptor& out = attributes[static_cast<std::size_t>(idx)];
        out.kind = AttributeKind::Discrete;
        out.dictionary.clear();
        out.bin_cuts = spec.cut_points;
    }

    return InformationSystem(std::move(attributes), std::move(columns),
                             table.decision(), table.decision_column());
}

DatasetSummary describe(const InformationSystem& table) {
    DatasetSummary summary;
    summary.rows = table.row_count();
    for (const auto& desc : table.attributes()) {
        AttributeSummary a;
        a.name = desc.name;
        a.kind = desc.kind;
        const auto& col = table.column(desc.index);
        if (desc.has_dictionary()) {
            a.distinct = static_cast<std::int64_t>(desc.dictionary.size());
            a.dictionary = desc.dictionary;
        } else {
            std::unordered_set<std::int64_t> distinct(col.begin(), col.end());
            a.distinct = static_cast<std::int64_t>(distinct.size());
            auto [mn, mx] = std::minmax_element(col.begin(), col.end());
            a.min = *mn;
            a.max = *mx;
        }
        summary.attributes.push_back(std::move(a));
    }
    summary.decision_name = table.decision().name;
    summary.decision_kind = table.decision().kind;
    auto counts = table.class_distribution();
    for (std::size_t i = 0; i < counts.size(); ++i)
        summary.class_distribution.emplace_back(table.decision().dictionary[i], counts[i]);
    return summary;
}

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

Schema schema_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("bad schema document: ") + e.what());
    }
    Schema schema;
    if (doc.contains("decision")) schema.decision = doc["decision"].get<std::string>();
    if (doc.contains("kinds"))
        for (auto& [name, kind] : doc["kinds"].items())
            schema.kinds[name] = attribute_kind_from_string(kind.get<std::string>());
    return schema;
}

Schema schema_from_file(const std::string& path) { return schema_from_json(slurp(path)); }

std::vector<BinningSpec> binning_specs_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("bad binning document: ") + e.what());
    }
    if (!doc.is_object()) throw InputError("binning document must be an object");
    std::vector<BinningSpec> specs;
    for (auto& [name, cuts] : doc.items()) {
        if (!cuts.is_array()) throw InputError("cut points for " + name + " must be an array");
        std::vector<double> values;
        for (const auto& c : cuts) values.push_back(c.get<double>());
        try {
            specs.emplace_back(name, std::move(values));
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        }
    }
    return specs;
}

std::vector<BinningSpec> binning_specs_from_file(const std::string& path) {
    return binning_specs_from_json(slurp(path));
}

}  // namespace reductminer
