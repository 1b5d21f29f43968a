#include "reductminer/roughset.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>
#include <unordered_map>

namespace reductminer {

const char* to_string(ScanMode mode) {
    return mode == ScanMode::Absolute ? "absolute" : "decision-relative";
}

const char* to_string(ReductVerdict v) {
    switch (v) {
        case ReductVerdict::Reduct: return "reduct";
        case ReductVerdict::Dependent: return "dependent";
        case ReductVerdict::NotEquivalent: return "not_equivalent";
    }
    return "?";
}

namespace {

std::vector<int> member_indices(AttributeSet r) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(r.count()));
    r.for_each([&](int i) { out.push_back(i); });
    return out;
}

void check_attribute_set(const InformationSystem& table, AttributeSet r) {
    if (r.empty())
        throw std::invalid_argument(
            "empty attribute set: the trivial one-block partition must be "
            "requested explicitly");
    AttributeSet valid = table.all_attributes();
    if (!r.subset_of(valid))
        throw std::invalid_argument("attribute set contains indices outside the table");
}

struct RowHash {
    const InformationSystem* table;
    const std::vector<int>* attrs;
    std::size_t operator()(RowIndex row) const {
        std::uint64_t h = 1469598103934665603ull;
        for (int a : *attrs) {
            h ^= static_cast<std::uint64_t>(table->value(row, a));
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

struct RowEq {
    const InformationSystem* table;
    const std::vector<int>* attrs;
    bool operator()(RowIndex a, RowIndex b) const {
        for (int i : *attrs)
            if (table->value(a, i) != table->value(b, i)) return false;
        return true;
    }
};

}  // namespace

Partition partition_by(const InformationSystem& table, AttributeSet r,
                       bool trivial_on_empty) {
    Partition p;
    p.attribute_set = r;
    const auto n = static_cast<RowIndex>(table.row_count());

    if (r.empty()) {
        if (!trivial_on_empty) check_attribute_set(table, r);
        RowSet all(n);
        for (RowIndex i = 0; i < n; ++i) all[i] = i;
        p.blocks.push_back(std::move(all));
        return p;
    }
    check_attribute_set(table, r);

    const std::vector<int> attrs = member_indices(r);
    std::unordered_map<RowIndex, std::uint32_t, RowHash, RowEq> block_of(
        table.row_count() * 2, RowHash{&table, &attrs}, RowEq{&table, &attrs});

    // Rows arrive in ascending order, so blocks are ascending internally
    // and ordered by smallest member without any extra sorting.
    for (RowIndex row = 0; row < n; ++row) {
        auto [it, inserted] =
            block_of.try_emplace(row, static_cast<std::uint32_t>(p.blocks.size()));
        if (inserted)
            p.blocks.push_back({row});
        else
            p.blocks[it->second].push_back(row);
    }
    return p;
}

bool same_partition(const Partition& a, const Partition& b) {
    return a.blocks == b.blocks;
}

bool refines(const Partition& fine, const Partition& coarse) {
    std::size_t rows = 0;
    for (const auto& b : coarse.blocks) rows = std::max<std::size_t>(rows, b.back() + 1);
    std::vector<std::uint32_t> owner(rows, 0);
    for (std::uint32_t k = 0; k < coarse.blocks.size(); ++k)
        for (RowIndex row : coarse.blocks[k]) owner[row] = k;
    for (const auto& block : fine.blocks)
        for (RowIndex row : block)
            if (owner[row] != owner[block.front()]) return false;
    return true;
}

Approximation approximate(const InformationSystem& table, AttributeSet r,
                          const RowSet& target) {
    const std::size_t n = table.row_count();
    for (RowIndex row : target)
        if (row >= n) throw std::invalid_argument("target row outside the universe");

    Approximation approx;
    approx.target = target;
    approx.attribute_set = r;

    std::vector<char> in_target(n, 0);
    for (RowIndex row : target) in_target[row] = 1;

    Partition partition = partition_by(table, r);
    std::vector<char> in_lower(n, 0), in_upper(n, 0);
    for (const auto& block : partition.blocks) {
        std::size_t overlap = 0;
        for (RowIndex row : block) overlap += in_target[row] ? 1u : 0u;
        if (overlap == 0) continue;
        const bool full = overlap == block.size();
        for (RowIndex row : block) {
            in_upper[row] = 1;
            if (full) in_lower[row] = 1;
        }
    }
    for (RowIndex row = 0; row < n; ++row) {
        if (in_lower[row]) approx.lower.push_back(row);
        if (in_upper[row]) approx.upper.push_back(row);
    }
    return approx;
}

RowSet positive_region(const InformationSystem& table, AttributeSet r,
                       bool trivial_on_empty) {
    Partition partition = partition_by(table, r, trivial_on_empty);
    std::vector<char> pos(table.row_count(), 0);
    for (const auto& block : partition.blocks) {
        const std::int64_t first = table.decision_value(block.front());
        bool pure = true;
        for (RowIndex row : block)
            if (table.decision_value(row) != first) {
                pure = false;
                break;
            }
        if (pure)
            for (RowIndex row : block) pos[row] = 1;
    }
    RowSet out;
    for (RowIndex row = 0; row < table.row_count(); ++row)
        if (pos[row]) out.push_back(row);
    return out;
}

void DiscernibilitySummary::merge(const DiscernibilitySummary& other) {
    core |= other.core;
    singleton_pair_count += other.singleton_pair_count;
    pair_count += other.pair_count;
    if (entry_histogram.size() < other.entry_histogram.size())
        entry_histogram.resize(other.entry_histogram.size(), 0);
    for (std::size_t i = 0; i < other.entry_histogram.size(); ++i)
        entry_histogram[i] += other.entry_histogram[i];
}

namespace {

unsigned env_thread_cap() {
    const char* env = std::getenv("REDUCTMINER_THREADS");
    if (!env || !*env) return 0;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || v < 0) return 0;
    return static_cast<unsigned>(v);
}

unsigned resolve_threads(unsigned requested, std::size_t rows) {
    unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    unsigned cap = env_thread_cap();
    if (cap != 0) n = std::min(n, cap);
    // Not worth spinning threads up for tiny universes.
    if (rows < 2048) n = 1;
    return std::max(1u, n);
}

// Contiguous i-ranges with roughly equal pair counts: worker w scans
// rows [lo, hi) against all later rows.
std::vector<std::size_t> panel_boundaries(std::size_t n, unsigned workers) {
    std::vector<std::size_t> bounds{0};
    const double total = 0.5 * double(n) * double(n - 1);
    for (unsigned w = 1; w < workers; ++w) {
        const double want = total * w / workers;
        // Solve n*i - i^2/2 = want for the panel start.
        double i = double(n) - std::sqrt(std::max(0.0, double(n) * double(n) - 2.0 * want));
        auto b = static_cast<std::size_t>(i);
        b = std::clamp(b, bounds.back(), n);
        bounds.push_back(b);
    }
    bounds.push_back(n);
    return bounds;
}

template <typename T>
struct PackedRows {
    std::vector<T> data;  // row-major, width values per row
    std::size_t width = 0;
    const T* row(std::size_t i) const { return data.data() + i * width; }
};

template <typename T>
PackedRows<T> pack_rows(const InformationSystem& table, const std::vector<int>& attrs) {
    PackedRows<T> packed;
    packed.width = attrs.size();
    packed.data.resize(table.row_count() * attrs.size());
    for (std::size_t k = 0; k < attrs.size(); ++k) {
        const auto& col = table.column(attrs[k]);
        for (std::size_t row = 0; row < col.size(); ++row)
            packed.data[row * packed.width + k] = static_cast<T>(col[row]);
    }
    return packed;
}

bool fits_int32(const InformationSystem& table, const std::vector<int>& attrs) {
    for (int a : attrs)
        for (std::int64_t v : table.column(a))
            if (v < std::numeric_limits<std::int32_t>::min() ||
                v > std::numeric_limits<std::int32_t>::max())
                return false;
    return true;
}

template <typename T>
DiscernibilitySummary scan_panel(const PackedRows<T>& packed,
                                 const std::vector<std::int64_t>* decision,
                                 std::size_t lo, std::size_t hi, std::size_t n,
                                 std::size_t width) {
    DiscernibilitySummary local;
    local.entry_histogram.assign(width, 0);
    std::uint64_t core_bits = 0;

    for (std::size_t i = lo; i < hi; ++i) {
        const T* ri = packed.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const T* rj = packed.row(j);
            std::uint64_t mask = 0;
            for (std::size_t k = 0; k < width; ++k)
                mask |= static_cast<std::uint64_t>(ri[k] != rj[k]) << k;
            if (mask == 0) continue;
            if (decision && (*decision)[i] == (*decision)[j]) continue;
            if ((mask & (mask - 1)) == 0) {
                core_bits |= mask;
                ++local.singleton_pair_count;
            }
            std::uint64_t bits = mask;
            while (bits != 0) {
                ++local.entry_histogram[static_cast<std::size_t>(std::countr_zero(bits))];
                bits &= bits - 1;
            }
        }
    }
    local.core = AttributeSet::from_bits(core_bits);
    return local;
}

template <typename T>
DiscernibilitySummary run_scan(const InformationSystem& table, const std::vector<int>& attrs,
                               ScanMode mode, unsigned threads) {
    const std::size_t n = table.row_count();
    const std::size_t width = attrs.size();
    PackedRows<T> packed = pack_rows<T>(table, attrs);
    const std::vector<std::int64_t>* decision =
        mode == ScanMode::DecisionRelative ? &table.decision_column() : nullptr;

    const unsigned workers = resolve_threads(threads, n);
    std::vector<DiscernibilitySummary> partials(workers);
    if (workers == 1) {
        partials[0] = scan_panel(packed, decision, 0, n, n, width);
    } else {
        const auto bounds = panel_boundaries(n, workers);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                partials[w] = scan_panel(packed, decision, bounds[w], bounds[w + 1], n, width);
            });
        for (auto& t : pool) t.join();
    }

    // Histogram slots are panel-local attribute positions; remap to the
    // table-wide attribute indices while merging in worker order.
    DiscernibilitySummary result;
    result.mode = mode;
    result.entry_histogram.assign(table.attribute_count(), 0);
    std::uint64_t core_bits = 0;
    for (const auto& partial : partials) {
        for (std::size_t k = 0; k < width; ++k)
            result.entry_histogram[static_cast<std::size_t>(attrs[k])] +=
                partial.entry_histogram[k];
        partial.core.for_each([&](int k) {
            core_bits |= std::uint64_t{1} << attrs[static_cast<std::size_t>(k)];
        });
        result.singleton_pair_count += partial.singleton_pair_count;
    }
    result.core = AttributeSet::from_bits(core_bits);
    result.pair_count = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    return result;
}

}  // namespace

DiscernibilitySummary discernibility_scan(const InformationSystem& table, AttributeSet r,
                                          ScanMode mode, unsigned threads) {
    check_attribute_set(table, r);
    const std::vector<int> attrs = member_indices(r);
    DiscernibilitySummary result = fits_int32(table, attrs)
                                       ? run_scan<std::int32_t>(table, attrs, mode, threads)
                                       : run_scan<std::int64_t>(table, attrs, mode, threads);
    result.scanned = r;
    return result;
}

DiscernibilityMatrix::DiscernibilityMatrix(std::size_t rows, AttributeSet scanned,
                                           ScanMode mode, std::size_t attribute_count)
    : rows_(rows),
      scanned_(scanned),
      mode_(mode),
      attribute_count_(attribute_count),
      entries_(rows * (rows - 1) / 2) {}

AttributeSet& DiscernibilityMatrix::at(std::size_t i, std::size_t j) {
    if (j >= i || i >= rows_) throw std::out_of_range("matrix entry requires i > j");
    return entries_[i * (i - 1) / 2 + j];
}

AttributeSet DiscernibilityMatrix::at(std::size_t i, std::size_t j) const {
    if (j >= i || i >= rows_) throw std::out_of_range("matrix entry requires i > j");
    return entries_[i * (i - 1) / 2 + j];
}

DiscernibilitySummary DiscernibilityMatrix::summarize() const {
    DiscernibilitySummary summary;
    summary.mode = mode_;
    summary.scanned = scanned_;
    summary.pair_count = static_cast<std::uint64_t>(rows_) * (rows_ - 1) / 2;
    summary.entry_histogram.assign(attribute_count_, 0);
    for (const AttributeSet& entry : entries_) {
        if (entry.empty()) continue;
        if (entry.count() == 1) {
            summary.core |= entry;
            ++summary.singleton_pair_count;
        }
        entry.for_each([&](int a) { ++summary.entry_histogram[static_cast<std::size_t>(a)]; });
    }
    return summary;
}

DiscernibilityMatrix materialize_matrix(const InformationSystem& table, AttributeSet r,
                                        ScanMode mode, std::size_t max_rows) {
    check_attribute_set(table, r);
    if (table.row_count() > max_rows)
        throw InputError("universe of " + std::to_string(table.row_count()) +
                         " rows exceeds the explicit-matrix cap of " +
                         std::to_string(max_rows) + "; use discernibility_scan instead");

    const std::vector<int> attrs = member_indices(r);
    DiscernibilityMatrix matrix(table.row_count(), r, mode,
                                static_cast<std::size_t>(table.attribute_count()));
    for (std::size_t i = 1; i < table.row_count(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (mode == ScanMode::DecisionRelative &&
                table.decision_value(i) == table.decision_value(j))
                continue;
            AttributeSet entry;
            for (int a : attrs)
                if (table.value(i, a) != table.value(j, a)) entry.add(a);
            matrix.at(i, j) = entry;
        }
    }
    return matrix;
}

namespace {

bool preserves(const InformationSystem& table, AttributeSet candidate,
               const Partition& baseline_partition, const RowSet& baseline_pos,
               ScanMode mode) {
    if (mode == ScanMode::Absolute)
        return same_partition(partition_by(table, candidate, true), baseline_partition);
    // Positive regions grow monotonically with attributes, so comparing
    // sizes is enough once candidate is a subset of the baseline.
    return positive_region(table, candidate, true).size() == baseline_pos.size();
}

}  // namespace

ReductVerdict is_reduct(const InformationSystem& table, AttributeSet r,
                        AttributeSet baseline, ScanMode mode) {
    if (r.empty()) throw std::invalid_argument("candidate reduct must not be empty");
    if (baseline.empty()) throw std::invalid_argument("baseline must not be empty");
    if (!r.subset_of(baseline))
        throw std::invalid_argument("candidate must be a subset of the baseline");
    check_attribute_set(table, baseline);

    Partition baseline_partition;
    RowSet baseline_pos;
    if (mode == ScanMode::Absolute)
        baseline_partition = partition_by(table, baseline);
    else
        baseline_pos = positive_region(table, baseline);

    if (!preserves(table, r, baseline_partition, baseline_pos, mode))
        return ReductVerdict::NotEquivalent;

    bool removable = false;
    r.for_each([&](int a) {
        if (removable) return;
        AttributeSet without = r;
        without.remove(a);
        if (preserves(table, without, baseline_partition, baseline_pos, mode))
            removable = true;
    });
    return removable ? ReductVerdict::Dependent : ReductVerdict::Reduct;
}

namespace {

inline std::uint64_t pairs_of(std::uint64_t n) { return n * (n - 1) / 2; }

// Unordered pairs inside `rows` with different decision values.
std::uint64_t mixed_decision_pairs(const InformationSystem& table, const RowSet& rows) {
    std::unordered_map<std::int64_t, std::uint64_t> per_class;
    for (RowIndex row : rows) ++per_class[table.decision_value(row)];
    std::uint64_t same = 0;
    for (const auto& [cls, count] : per_class) same += pairs_of(count);
    return pairs_of(rows.size()) - same;
}

// Pairs inside `rows` (optionally only decision-mixed ones) that the
// candidate attribute separates.
std::uint64_t pairs_split_by(const InformationSystem& table, const RowSet& rows,
                             int attribute, ScanMode mode) {
    std::unordered_map<std::int64_t, RowSet> groups;
    for (RowIndex row : rows) groups[table.value(row, attribute)].push_back(row);
    if (groups.size() <= 1) return 0;
    if (mode == ScanMode::Absolute) {
        std::uint64_t same = 0;
        for (const auto& [value, group] : groups) same += pairs_of(group.size());
        return pairs_of(rows.size()) - same;
    }
    std::uint64_t mixed = mixed_decision_pairs(table, rows);
    for (const auto& [value, group] : groups) mixed -= mixed_decision_pairs(table, group);
    return mixed;
}

}  // namespace

AttributeSet greedy_reduct(const InformationSystem& table, ScanMode mode) {
    const AttributeSet everything = table.all_attributes();
    DiscernibilitySummary scan = discernibility_scan(table, everything, mode);

    Partition target_partition;
    RowSet target_pos;
    if (mode == ScanMode::Absolute)
        target_partition = partition_by(table, everything);
    else
        target_pos = positive_region(table, everything);

    auto satisfied = [&](AttributeSet candidate) {
        return preserves(table, candidate, target_partition, target_pos, mode);
    };

    AttributeSet result = scan.core;
    std::vector<int> added_order;

    while (!satisfied(result)) {
        Partition current = partition_by(table, result, true);
        int best_attr = -1;
        std::uint64_t best_score = 0;
        everything.for_each([&](int a) {
            if (result.contains(a)) return;
            std::uint64_t score = 0;
            for (const auto& block : current.blocks) {
                if (block.size() < 2) continue;
                score += pairs_split_by(table, block, a, mode);
            }
            if (score > best_score) {
                best_score = score;
                best_attr = a;
            }
        });
        if (best_attr < 0) break;  // nothing separates anything further
        result.add(best_attr);
        added_order.push_back(best_attr);
    }

    // Reverse-order prune over everything, greedy additions first. In
    // absolute mode core members can never go (a singleton pair needs
    // them); in decision-relative mode they can, when the pair lies
    // outside the positive region.
    std::vector<int> prune_order(added_order.rbegin(), added_order.rend());
    scan.core.for_each([&](int a) {
        if (result.contains(a)) prune_order.push_back(a);
    });
    for (int a : prune_order) {
        AttributeSet without = result;
        without.remove(a);
        if (satisfied(without)) result = without;
    }
    return result;
}

std::vector<EvaluatedRule> rules_from_partition(const InformationSystem& table,
                                                const Partition& partition) {
    const std::vector<int> attrs = member_indices(partition.attribute_set);
    for (int a : attrs) {
        const AttributeDescriptor& desc = table.attribute(a);
        if (desc.kind == AttributeKind::Continuous && !desc.is_binned())
            throw InputError("attribute " + desc.name +
                             " is continuous; apply binning before extracting rules");
    }

    const std::vector<std::int64_t> global = table.class_distribution();

    std::vector<EvaluatedRule> rules;
    rules.reserve(partition.blocks.size());
    for (const auto& block : partition.blocks) {
        Rule rule;
        rule.provenance = RuleProvenance::RoughSet;
        const RowIndex representative = block.front();
        for (int a : attrs) {
            const AttributeDescriptor& desc = table.attribute(a);
            const std::int64_t v = table.value(representative, a);
            if (desc.has_dictionary()) {
                rule.add_condition(Condition::equals(desc.name, desc.decode(v)));
            } else if (desc.is_binned()) {
                BinningSpec spec(desc.name, desc.bin_cuts);
                auto [lo, hi] = spec.bin_bounds(static_cast<int>(v));
                rule.add_condition(Condition::interval(desc.name, lo, hi));
            } else {
                rule.add_condition(Condition::equals(desc.name, v));
            }
        }

        std::vector<std::int64_t> counts(table.class_count(), 0);
        for (RowIndex row : block) ++counts[static_cast<std::size_t>(table.decision_value(row))];
        std::int64_t best = 0;
        for (std::int64_t c = 1; c < table.class_count(); ++c) {
            const auto ci = static_cast<std::size_t>(c);
            const auto bi = static_cast<std::size_t>(best);
            if (counts[ci] > counts[bi] ||
                (counts[ci] == counts[bi] && global[ci] > global[bi]))
                best = c;
        }
        rule.consequent = table.class_label(best);

        EvaluatedRule evaluated;
        evaluated.metrics = evaluate_rule(rule, table);
        evaluated.rule = std::move(rule);
        rules.push_back(std::move(evaluated));
    }
    return rules;
}

}  // namespace reductminer
