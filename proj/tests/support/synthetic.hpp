#pragma once

// Shared helpers for the test suites: in-memory table builders, random
// table generation, and small brute-force oracles kept independent of
// the engine's own algorithms.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "reductminer/dataset.hpp"
#include "reductminer/roughset.hpp"

namespace testsupport {

using namespace reductminer;

struct ColumnSpec {
    std::string name;
    AttributeKind kind = AttributeKind::Discrete;
    std::vector<std::string> dictionary;  // for categorical/binary
    std::vector<std::int64_t> values;
};

/// Builds a table from explicit columns; the last argument is the
/// decision column (labels resolved through its dictionary).
inline InformationSystem make_table(std::vector<ColumnSpec> columns,
                                    std::vector<std::string> decision_labels,
                                    const std::vector<std::string>& decision_values) {
    std::vector<AttributeDescriptor> attrs;
    std::vector<std::vector<std::int64_t>> data;
    for (auto& col : columns) {
        AttributeDescriptor d;
        d.name = col.name;
        d.kind = col.kind;
        d.dictionary = col.dictionary;
        attrs.push_back(std::move(d));
        data.push_back(std::move(col.values));
    }
    AttributeDescriptor decision;
    decision.name = "class";
    decision.kind = decision_labels.size() == 2 ? AttributeKind::Binary
                                                : AttributeKind::Categorical;
    decision.dictionary = decision_labels;
    std::vector<std::int64_t> codes;
    for (const auto& label : decision_values) {
        std::int64_t code = -1;
        for (std::size_t i = 0; i < decision_labels.size(); ++i)
            if (decision_labels[i] == label) code = static_cast<std::int64_t>(i);
        if (code < 0) throw std::logic_error("bad decision label in test fixture");
        codes.push_back(code);
    }
    return InformationSystem(std::move(attrs), std::move(data), std::move(decision),
                             std::move(codes));
}

/// Numeric-only convenience: columns A0..Ak plus integer class codes.
inline InformationSystem make_numeric_table(
    const std::vector<std::vector<std::int64_t>>& columns,
    const std::vector<int>& decision) {
    std::vector<ColumnSpec> specs;
    for (std::size_t i = 0; i < columns.size(); ++i)
        specs.push_back({"a" + std::to_string(i), AttributeKind::Discrete, {}, columns[i]});
    int max_class = 0;
    for (int d : decision) max_class = std::max(max_class, d);
    std::vector<std::string> labels;
    for (int c = 0; c <= std::max(1, max_class); ++c) labels.push_back("c" + std::to_string(c));
    std::vector<std::string> values;
    for (int d : decision) values.push_back(labels[static_cast<std::size_t>(d)]);
    return make_table(std::move(specs), std::move(labels), values);
}

/// Random table with small-cardinality columns, sized for exhaustive
/// cross-checks (<= 8 attributes, <= 40 rows).
inline InformationSystem random_table(std::mt19937& rng, int max_attrs = 8,
                                      int max_rows = 40) {
    std::uniform_int_distribution<int> attr_count(1, max_attrs);
    std::uniform_int_distribution<int> row_count(1, max_rows);
    const int attrs = attr_count(rng);
    const int rows = row_count(rng);

    std::vector<std::vector<std::int64_t>> columns;
    for (int a = 0; a < attrs; ++a) {
        std::uniform_int_distribution<int> cardinality(1, 4);
        std::uniform_int_distribution<std::int64_t> value(0, cardinality(rng));
        std::vector<std::int64_t> col;
        for (int r = 0; r < rows; ++r) col.push_back(value(rng));
        columns.push_back(std::move(col));
    }
    std::uniform_int_distribution<int> classes(2, 3);
    const int k = classes(rng);
    std::uniform_int_distribution<int> cls(0, k - 1);
    std::vector<int> decision;
    for (int r = 0; r < rows; ++r) decision.push_back(cls(rng));
    return make_numeric_table(columns, decision);
}

inline RowSet all_rows(const InformationSystem& table) {
    RowSet rows(table.row_count());
    for (RowIndex i = 0; i < table.row_count(); ++i) rows[i] = i;
    return rows;
}

// ---- brute-force oracles -------------------------------------------------

/// Every reduct of the full conditional set, by exhaustive subset
/// enumeration. A subset is a reduct when it induces the same partition
/// as the full set and no proper subset does (the empty set induces the
/// trivial partition).
inline std::vector<AttributeSet> brute_force_reducts(const InformationSystem& table,
                                                     ScanMode mode = ScanMode::Absolute) {
    const int m = table.attribute_count();
    const Partition target = partition_by(table, table.all_attributes());
    const RowSet target_pos = positive_region(table, table.all_attributes());

    auto equivalent = [&](std::uint64_t bits) {
        AttributeSet s = AttributeSet::from_bits(bits);
        if (mode == ScanMode::Absolute)
            return same_partition(partition_by(table, s, true), target);
        return positive_region(table, s, true).size() == target_pos.size();
    };

    std::vector<std::uint64_t> equivalents;
    const std::uint64_t limit = std::uint64_t{1} << m;
    for (std::uint64_t bits = 0; bits < limit; ++bits)
        if (equivalent(bits)) equivalents.push_back(bits);

    std::vector<AttributeSet> reducts;
    for (std::uint64_t bits : equivalents) {
        bool minimal = true;
        for (std::uint64_t other : equivalents)
            if (other != bits && (other & ~bits) == 0) {
                minimal = false;
                break;
            }
        if (minimal) reducts.push_back(AttributeSet::from_bits(bits));
    }
    return reducts;
}

inline AttributeSet intersect_all(const std::vector<AttributeSet>& sets) {
    if (sets.empty()) return {};
    AttributeSet out = sets.front();
    for (const auto& s : sets) out &= s;
    return out;
}

inline std::uint64_t pairs_of(std::uint64_t n) { return n * (n - 1) / 2; }

/// Analytic per-attribute entry counts, independent of the pair scan:
/// group sizes per value (and per value x decision for the relative
/// mode) give the number of discerned pairs directly.
inline std::vector<std::uint64_t> histogram_oracle(const InformationSystem& table,
                                                   ScanMode mode) {
    const std::uint64_t n = table.row_count();
    std::vector<std::uint64_t> hist(table.attribute_count(), 0);

    std::uint64_t mixed_total = pairs_of(n);
    {
        std::map<std::int64_t, std::uint64_t> per_class;
        for (std::int64_t d : table.decision_column()) ++per_class[d];
        for (const auto& [d, c] : per_class) mixed_total -= pairs_of(c);
    }

    for (int a = 0; a < table.attribute_count(); ++a) {
        std::map<std::int64_t, std::uint64_t> per_value;
        std::map<std::pair<std::int64_t, std::int64_t>, std::uint64_t> per_value_class;
        for (std::size_t r = 0; r < table.row_count(); ++r) {
            ++per_value[table.value(r, a)];
            ++per_value_class[{table.value(r, a), table.decision_value(r)}];
        }
        if (mode == ScanMode::Absolute) {
            std::uint64_t same = 0;
            for (const auto& [v, c] : per_value) same += pairs_of(c);
            hist[static_cast<std::size_t>(a)] = pairs_of(n) - same;
        } else {
            // mixed pairs that also agree on a
            std::uint64_t agreeing_mixed = 0;
            for (const auto& [v, c] : per_value) agreeing_mixed += pairs_of(c);
            for (const auto& [vc, c] : per_value_class) agreeing_mixed -= pairs_of(c);
            hist[static_cast<std::size_t>(a)] = mixed_total - agreeing_mixed;
        }
    }
    return hist;
}

// ---- file helpers ---------------------------------------------------------

class TempDir {
public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        for (int i = 0; i < 10000; ++i) {
            auto candidate = base / ("reductminer_test_" + std::to_string(std::rand()) +
                                     "_" + std::to_string(i));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("could not create temp dir");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path.string();
}

}  // namespace testsupport
