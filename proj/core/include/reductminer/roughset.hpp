#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reductminer/attribute_set.hpp"
#include "reductminer/dataset.hpp"
#include "reductminer/rules.hpp"

namespace reductminer {

using RowIndex = std::uint32_t;
using RowSet = std::vector<RowIndex>;  // ascending, unique

/// Equivalence classes of row indices under agreement on attribute_set.
/// Canonical form: each block ascending, blocks ordered by first member.
struct Partition {
    std::vector<RowSet> blocks;
    AttributeSet attribute_set;

    std::size_t block_count() const { return blocks.size(); }
};

/// Partition of the universe under the indiscernibility relation of r.
/// An empty r is rejected unless trivial_on_empty is set, in which case
/// the one-block partition is returned.
Partition partition_by(const InformationSystem& table, AttributeSet r,
                       bool trivial_on_empty = false);

bool same_partition(const Partition& a, const Partition& b);

/// True when every block of fine is contained in some block of coarse.
bool refines(const Partition& fine, const Partition& coarse);

struct Approximation {
    RowSet lower;
    RowSet upper;
    RowSet target;
    AttributeSet attribute_set;

    bool definable() const { return lower == upper; }
};

/// Lower = union of blocks inside target, upper = union of blocks
/// meeting target.
Approximation approximate(const InformationSystem& table, AttributeSet r,
                          const RowSet& target);

/// Rows whose block under r is pure in the decision attribute.
RowSet positive_region(const InformationSystem& table, AttributeSet r,
                       bool trivial_on_empty = false);

enum class ScanMode { Absolute, DecisionRelative };
const char* to_string(ScanMode mode);

/// Streaming summary of the pairwise discernibility structure. The full
/// matrix is never stored; only these aggregates are kept.
struct DiscernibilitySummary {
    AttributeSet core;
    std::uint64_t singleton_pair_count = 0;
    std::vector<std::uint64_t> entry_histogram;  // indexed by attribute
    std::uint64_t pair_count = 0;
    ScanMode mode = ScanMode::Absolute;
    AttributeSet scanned;

    void merge(const DiscernibilitySummary& other);
    bool operator==(const DiscernibilitySummary&) const = default;
};

/// Streams every unordered row pair, accumulating the core (union of
/// single-attribute entries), per-attribute entry counts and the pair
/// total. In decision-relative mode only pairs with different decision
/// values contribute entries; pair_count still covers all pairs.
/// threads = 0 means auto; REDUCTMINER_THREADS caps the worker count.
DiscernibilitySummary discernibility_scan(const InformationSystem& table,
                                          AttributeSet r,
                                          ScanMode mode = ScanMode::Absolute,
                                          unsigned threads = 0);

/// Explicit strictly-lower-triangular matrix for small universes.
class DiscernibilityMatrix {
public:
    DiscernibilityMatrix(std::size_t rows, AttributeSet scanned, ScanMode mode,
                         std::size_t attribute_count);

    std::size_t rows() const { return rows_; }
    AttributeSet scanned() const { return scanned_; }
    ScanMode mode() const { return mode_; }

    /// Entry for rows i > j.
    AttributeSet& at(std::size_t i, std::size_t j);
    AttributeSet at(std::size_t i, std::size_t j) const;

    /// Aggregates the explicit entries into the same summary shape the
    /// streaming scan produces; the two must agree on any input.
    DiscernibilitySummary summarize() const;

private:
    std::size_t rows_;
    AttributeSet scanned_;
    ScanMode mode_;
    std::size_t attribute_count_;
    std::vector<AttributeSet> entries_;
};

inline constexpr std::size_t kDefaultMatrixCap = 2000;

/// Materializes the explicit matrix; refuses universes above max_rows
/// and points the caller at discernibility_scan instead.
DiscernibilityMatrix materialize_matrix(const InformationSystem& table, AttributeSet r,
                                        ScanMode mode = ScanMode::Absolute,
                                        std::size_t max_rows = kDefaultMatrixCap);

enum class ReductVerdict { Reduct, Dependent, NotEquivalent };
const char* to_string(ReductVerdict v);

/// Checks whether r preserves baseline's discernment and is minimal.
/// Absolute mode compares indiscernibility partitions; decision-relative
/// mode compares positive regions of the decision attribute.
ReductVerdict is_reduct(const InformationSystem& table, AttributeSet r,
                        AttributeSet baseline, ScanMode mode = ScanMode::Absolute);

/// Core-seeded greedy search: repeatedly adds the attribute separating
/// the most not-yet-discerned pairs, then prunes. The result satisfies
/// is_reduct in the same mode (an empty result is possible only when the
/// baseline itself discerns nothing).
AttributeSet greedy_reduct(const InformationSystem& table,
                           ScanMode mode = ScanMode::Absolute);

/// One rule per block: shared attribute values as the antecedent
/// (interval conditions for binned attributes), majority decision class
/// as the consequent. Raw continuous attributes are rejected; bin them
/// first. Ties fall to the globally more frequent class, then the lower
/// code.
std::vector<EvaluatedRule> rules_from_partition(const InformationSystem& table,
                                                const Partition& partition);

}  // namespace reductminer
