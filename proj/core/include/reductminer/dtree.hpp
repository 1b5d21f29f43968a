#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reductminer/dataset.hpp"
#include "reductminer/roughset.hpp"
#include "reductminer/rules.hpp"

namespace reductminer {

struct TreeParams {
    std::int64_t min_leaf = 2;
    double min_gain = 1e-4;
    int max_depth = 30;
};

enum class SplitKind { Threshold, Categorical };

struct SplitCandidate {
    int attribute = -1;
    SplitKind kind = SplitKind::Threshold;
    double threshold = 0.0;
    double gain = 0.0;
    double split_info = 0.0;
    double gain_ratio = 0.0;
};

/// Decision-tree node. A split tests one attribute (numeric: value <=
/// threshold goes left; categorical: one branch per dictionary value).
/// Attribute names and branch labels are stored as text so a tree built
/// on one table classifies rows of another with compatible columns.
struct TreeNode {
    bool leaf = true;

    // Split fields.
    std::string attribute;
    SplitKind split_kind = SplitKind::Threshold;
    double threshold = 0.0;
    std::vector<std::string> branch_labels;
    std::vector<std::unique_ptr<TreeNode>> children;

    // Populated on every node.
    std::vector<std::int64_t> class_counts;
    std::string class_label;  // majority class (leaf prediction)
    std::int64_t total = 0;

    std::size_t leaf_count() const;
    std::size_t node_count() const;
};

/// Shannon entropy in bits of a count vector; zero counts contribute 0.
/// Throws std::invalid_argument when everything is zero.
double entropy(std::span<const std::int64_t> class_counts);

/// Weighted decision entropy over a row partition (Eq.-style v-way sum).
double conditional_entropy(const InformationSystem& table,
                           const std::vector<RowSet>& blocks);

/// Entropy of the block-size distribution itself.
double split_info(std::span<const std::int64_t> block_sizes, std::int64_t total);

/// Best split over the given rows: numeric attributes get their maximum-
/// gain midpoint threshold, categorical ones a single v-way candidate.
/// Candidates need gain >= min_gain and gain >= the mean positive gain
/// over all candidates, then the highest gain ratio wins (ties: lower
/// attribute index, lower threshold). Returns nullopt when nothing
/// qualifies.
std::optional<SplitCandidate> best_split(const InformationSystem& table,
                                         const RowSet& rows,
                                         const TreeParams& params = {});

struct GainRatioEntry {
    std::string attribute;
    AttributeKind kind = AttributeKind::Discrete;
    std::optional<double> threshold;
    double gain = 0.0;
    double split_info = 0.0;
    double gain_ratio = 0.0;
};

/// Root-level gain ratio per attribute, descending (stable on ties).
/// Attributes with no viable split report zeros.
std::vector<GainRatioEntry> gain_ratio_table(const InformationSystem& table,
                                             const TreeParams& params = {});

std::unique_ptr<TreeNode> build_tree(const InformationSystem& table,
                                     const TreeParams& params = {});

struct Classification {
    std::string label;
    const TreeNode* leaf = nullptr;
};

/// Routes one row of any schema-compatible table down the tree. Unseen
/// categorical values go to the largest child by training count. Throws
/// InputError when the table lacks a tested attribute or its kind is
/// incompatible with the split.
Classification classify(const TreeNode& tree, const InformationSystem& table,
                        std::size_t row);

PredictionStats tree_accuracy(const TreeNode& tree, const InformationSystem& table);

/// One rule per leaf; path conditions on the same attribute are merged
/// into a single interval.
std::vector<Rule> tree_to_rules(const TreeNode& tree);

}  // namespace reductminer
