#include "reductminer/dtree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace reductminer {

namespace {

constexpr double kGainEps = 1e-12;

double plogp_sum(std::span<const std::int64_t> counts, std::int64_t total) {
    double h = 0.0;
    for (std::int64_t c : counts) {
        if (c <= 0) continue;
        const double p = double(c) / double(total);
        h -= p * std::log2(p);
    }
    return h;
}

}  // namespace

std::size_t TreeNode::leaf_count() const {
    if (leaf) return 1;
    std::size_t n = 0;
    for (const auto& child : children) n += child->leaf_count();
    return n;
}

std::size_t TreeNode::node_count() const {
    std::size_t n = 1;
    for (const auto& child : children) n += child->node_count();
    return n;
}

double entropy(std::span<const std::int64_t> class_counts) {
    std::int64_t total = 0;
    for (std::int64_t c : class_counts) {
        if (c < 0) throw std::invalid_argument("negative class count");
        total += c;
    }
    if (total == 0) throw std::invalid_argument("entropy of an all-zero count vector");
    return plogp_sum(class_counts, total);
}

double conditional_entropy(const InformationSystem& table,
                           const std::vector<RowSet>& blocks) {
    if (blocks.empty()) throw std::invalid_argument("conditional entropy of an empty partition");
    std::int64_t total = 0;
    double weighted = 0.0;
    for (const auto& block : blocks) {
        if (block.empty()) continue;
        std::vector<std::int64_t> counts(table.class_count(), 0);
        for (RowIndex row : block)
            ++counts[static_cast<std::size_t>(table.decision_value(row))];
        weighted += double(block.size()) * entropy(counts);
        total += static_cast<std::int64_t>(block.size());
    }
    if (total == 0) throw std::invalid_argument("conditional entropy over zero rows");
    return weighted / double(total);
}

double split_info(std::span<const std::int64_t> block_sizes, std::int64_t total) {
    if (total <= 0) throw std::invalid_argument("split_info needs a positive total");
    std::int64_t sum = 0;
    for (std::int64_t s : block_sizes) sum += s;
    if (sum != total)
        throw std::invalid_argument("block sizes must sum to the total");
    return plogp_sum(block_sizes, total);
}

namespace {

std::int64_t majority_class(const std::vector<std::int64_t>& counts,
                            const std::vector<std::int64_t>& global) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < counts.size(); ++c) {
        if (counts[c] > counts[best] ||
            (counts[c] == counts[best] && global[c] > global[best]))
            best = c;
    }
    return static_cast<std::int64_t>(best);
}

struct NodeContext {
    const InformationSystem* table;
    const std::vector<std::int64_t>* global_counts;
    TreeParams params;
};

// Best threshold for one numeric attribute: maximum gain over midpoints
// of adjacent distinct values, both sides at least min_leaf rows.
std::optional<SplitCandidate> numeric_candidate(const NodeContext& ctx, const RowSet& rows,
                                                int attribute, double node_entropy) {
    const auto& table = *ctx.table;
    const int classes = table.class_count();
    const auto n = static_cast<std::int64_t>(rows.size());

    std::vector<std::pair<std::int64_t, std::int64_t>> values;  // (value, class)
    values.reserve(rows.size());
    for (RowIndex row : rows)
        values.emplace_back(table.value(row, attribute), table.decision_value(row));
    std::sort(values.begin(), values.end());
    if (values.front().first == values.back().first) return std::nullopt;

    std::vector<std::int64_t> left(static_cast<std::size_t>(classes), 0);
    std::vector<std::int64_t> right(static_cast<std::size_t>(classes), 0);
    for (const auto& [v, cls] : values) ++right[static_cast<std::size_t>(cls)];

    double best_gain = -1.0;
    double best_threshold = 0.0;
    std::int64_t best_left = 0;

    std::int64_t moved = 0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        ++left[static_cast<std::size_t>(values[i].second)];
        --right[static_cast<std::size_t>(values[i].second)];
        ++moved;
        if (values[i].first == values[i + 1].first) continue;
        if (moved < ctx.params.min_leaf || n - moved < ctx.params.min_leaf) continue;

        const double h_left = plogp_sum(left, moved);
        const double h_right = plogp_sum(right, n - moved);
        const double conditional =
            (double(moved) * h_left + double(n - moved) * h_right) / double(n);
        double gain = node_entropy - conditional;
        if (gain < 0 && gain > -kGainEps) gain = 0;
        const double threshold =
            (double(values[i].first) + double(values[i + 1].first)) / 2.0;
        if (gain > best_gain + kGainEps ||
            (gain > best_gain - kGainEps && threshold < best_threshold)) {
            best_gain = gain;
            best_threshold = threshold;
            best_left = moved;
        }
    }
    if (best_gain < 0) return std::nullopt;

    const std::int64_t sides[2] = {best_left, n - best_left};
    SplitCandidate cand;
    cand.attribute = attribute;
    cand.kind = SplitKind::Threshold;
    cand.threshold = best_threshold;
    cand.gain = best_gain;
    cand.split_info = split_info(sides, n);
    cand.gain_ratio = cand.split_info > 0 ? cand.gain / cand.split_info : 0.0;
    return cand;
}

std::optional<SplitCandidate> categorical_candidate(const NodeContext& ctx,
                                                    const RowSet& rows, int attribute,
                                                    double node_entropy) {
    const auto& table = *ctx.table;
    const AttributeDescriptor& desc = table.attribute(attribute);
    const auto fanout = desc.dictionary.size();
    const int classes = table.class_count();
    const auto n = static_cast<std::int64_t>(rows.size());

    std::vector<std::int64_t> branch_sizes(fanout, 0);
    std::vector<std::vector<std::int64_t>> branch_counts(
        fanout, std::vector<std::int64_t>(static_cast<std::size_t>(classes), 0));
    for (RowIndex row : rows) {
        const auto v = static_cast<std::size_t>(table.value(row, attribute));
        ++branch_sizes[v];
        ++branch_counts[v][static_cast<std::size_t>(table.decision_value(row))];
    }

    std::size_t nonempty = 0, viable = 0;
    for (std::int64_t s : branch_sizes) {
        if (s > 0) ++nonempty;
        if (s >= ctx.params.min_leaf) ++viable;
    }
    if (nonempty < 2 || viable < 2) return std::nullopt;

    double conditional = 0.0;
    for (std::size_t b = 0; b < fanout; ++b) {
        if (branch_sizes[b] == 0) continue;
        conditional += double(branch_sizes[b]) * plogp_sum(branch_counts[b], branch_sizes[b]);
    }
    conditional /= double(n);
    double gain = node_entropy - conditional;
    if (gain < 0 && gain > -kGainEps) gain = 0;
    if (gain < 0) return std::nullopt;

    const double si = split_info(branch_sizes, n);
    if (si <= 0) return std::nullopt;  // a single non-empty branch splits nothing

    SplitCandidate cand;
    cand.attribute = attribute;
    cand.kind = SplitKind::Categorical;
    cand.gain = gain;
    cand.split_info = si;
    cand.gain_ratio = gain / si;
    return cand;
}

std::optional<SplitCandidate> attribute_candidate(const NodeContext& ctx, const RowSet& rows,
                                                  int attribute, double node_entropy) {
    return ctx.table->attribute(attribute).has_dictionary()
               ? categorical_candidate(ctx, rows, attribute, node_entropy)
               : numeric_candidate(ctx, rows, attribute, node_entropy);
}

std::optional<SplitCandidate> pick_split(const NodeContext& ctx, const RowSet& rows) {
    const auto& table = *ctx.table;
    std::vector<std::int64_t> counts(table.class_count(), 0);
    for (RowIndex row : rows) ++counts[static_cast<std::size_t>(table.decision_value(row))];
    const double node_entropy = plogp_sum(counts, static_cast<std::int64_t>(rows.size()));

    std::vector<SplitCandidate> candidates;
    for (int a = 0; a < table.attribute_count(); ++a) {
        auto cand = attribute_candidate(ctx, rows, a, node_entropy);
        if (cand) candidates.push_back(*cand);
    }
    if (candidates.empty()) return std::nullopt;

    // C4.5 guard: only candidates whose gain reaches the mean positive
    // gain compete on gain ratio.
    double positive_sum = 0.0;
    std::size_t positive_n = 0;
    for (const auto& c : candidates)
        if (c.gain > kGainEps) {
            positive_sum += c.gain;
            ++positive_n;
        }
    const double floor = positive_n > 0 ? positive_sum / double(positive_n) : 0.0;

    const SplitCandidate* best = nullptr;
    for (const auto& c : candidates) {
        if (c.gain + kGainEps < ctx.params.min_gain) continue;
        if (c.gain + kGainEps < floor) continue;
        if (!best || c.gain_ratio > best->gain_ratio + kGainEps) best = &c;
    }
    if (!best) return std::nullopt;
    return *best;
}

std::unique_ptr<TreeNode> make_leaf(const NodeContext& ctx,
                                    std::vector<std::int64_t> counts, std::int64_t total) {
    auto node = std::make_unique<TreeNode>();
    node->leaf = true;
    node->total = total;
    node->class_label =
        ctx.table->class_label(majority_class(counts, *ctx.global_counts));
    node->class_counts = std::move(counts);
    return node;
}

std::unique_ptr<TreeNode> grow(const NodeContext& ctx, const RowSet& rows, int depth) {
    const auto& table = *ctx.table;
    std::vector<std::int64_t> counts(table.class_count(), 0);
    for (RowIndex row : rows) ++counts[static_cast<std::size_t>(table.decision_value(row))];

    std::int64_t nonzero = 0;
    for (std::int64_t c : counts) nonzero += c > 0 ? 1 : 0;
    const bool pure = nonzero <= 1;

    if (pure || depth >= ctx.params.max_depth)
        return make_leaf(ctx, std::move(counts), static_cast<std::int64_t>(rows.size()));

    auto split = pick_split(ctx, rows);
    if (!split)
        return make_leaf(ctx, std::move(counts), static_cast<std::int64_t>(rows.size()));

    auto node = std::make_unique<TreeNode>();
    node->leaf = false;
    node->total = static_cast<std::int64_t>(rows.size());
    node->attribute = table.attribute(split->attribute).name;
    node->split_kind = split->kind;
    node->threshold = split->threshold;
    node->class_counts = counts;
    node->class_label = table.class_label(majority_class(counts, *ctx.global_counts));

    if (split->kind == SplitKind::Threshold) {
        RowSet left, right;
        for (RowIndex row : rows) {
            if (double(table.value(row, split->attribute)) <= split->threshold)
                left.push_back(row);
            else
                right.push_back(row);
        }
        char label[64];
        std::snprintf(label, sizeof label, "<= %g", split->threshold);
        node->branch_labels.emplace_back(label);
        std::snprintf(label, sizeof label, "> %g", split->threshold);
        node->branch_labels.emplace_back(label);
        node->children.push_back(grow(ctx, left, depth + 1));
        node->children.push_back(grow(ctx, right, depth + 1));
    } else {
        const AttributeDescriptor& desc = table.attribute(split->attribute);
        std::vector<RowSet> branches(desc.dictionary.size());
        for (RowIndex row : rows)
            branches[static_cast<std::size_t>(table.value(row, split->attribute))]
                .push_back(row);
        for (std::size_t b = 0; b < branches.size(); ++b) {
            node->branch_labels.push_back(desc.dictionary[b]);
            if (branches[b].empty()) {
                // Value absent at this node: the zero-count leaf falls
                // back to the class tie-break.
                node->children.push_back(
                    make_leaf(ctx, std::vector<std::int64_t>(counts.size(), 0), 0));
            } else {
                node->children.push_back(grow(ctx, branches[b], depth + 1));
            }
        }
    }
    return node;
}

}  // namespace

std::optional<SplitCandidate> best_split(const InformationSystem& table, const RowSet& rows,
                                         const TreeParams& params) {
    if (rows.empty()) throw std::invalid_argument("best_split over an empty row set");
    const auto global = table.class_distribution();
    NodeContext ctx{&table, &global, params};
    return pick_split(ctx, rows);
}

std::vector<GainRatioEntry> gain_ratio_table(const InformationSystem& table,
                                             const TreeParams& params) {
    RowSet all(table.row_count());
    for (RowIndex i = 0; i < table.row_count(); ++i) all[i] = i;
    const auto global = table.class_distribution();
    NodeContext ctx{&table, &global, params};
    const double root_entropy =
        plogp_sum(global, static_cast<std::int64_t>(table.row_count()));

    std::vector<GainRatioEntry> entries;
    for (int a = 0; a < table.attribute_count(); ++a) {
        GainRatioEntry entry;
        entry.attribute = table.attribute(a).name;
        entry.kind = table.attribute(a).kind;
        if (auto cand = attribute_candidate(ctx, all, a, root_entropy)) {
            entry.gain = cand->gain;
            entry.split_info = cand->split_info;
            entry.gain_ratio = cand->gain_ratio;
            if (cand->kind == SplitKind::Threshold) entry.threshold = cand->threshold;
        }
        entries.push_back(std::move(entry));
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const GainRatioEntry& a, const GainRatioEntry& b) {
                         return a.gain_ratio > b.gain_ratio;
                     });
    return entries;
}

std::unique_ptr<TreeNode> build_tree(const InformationSystem& table,
                                     const TreeParams& params) {
    RowSet all(table.row_count());
    for (RowIndex i = 0; i < table.row_count(); ++i) all[i] = i;
    const auto global = table.class_distribution();
    NodeContext ctx{&table, &global, params};
    return grow(ctx, all, 0);
}

namespace {

const TreeNode* route(const TreeNode& node, const InformationSystem& table,
                      std::size_t row) {
    if (node.leaf) return &node;
    const int attr = table.attribute_index(node.attribute);
    const AttributeDescriptor& desc = table.attribute(attr);

    if (node.split_kind == SplitKind::Threshold) {
        if (desc.has_dictionary())
            throw InputError("attribute " + node.attribute +
                             " is categorical here but the tree tests a threshold");
        const std::size_t side =
            double(table.value(row, attr)) <= node.threshold ? 0 : 1;
        return route(*node.children[side], table, row);
    }

    if (!desc.has_dictionary())
        throw InputError("attribute " + node.attribute +
                         " is numeric here but the tree branches on values");
    const std::string label = desc.decode(table.value(row, attr));
    for (std::size_t b = 0; b < node.branch_labels.size(); ++b)
        if (node.branch_labels[b] == label) return route(*node.children[b], table, row);

    // Unseen value: follow the largest child by training count.
    std::size_t largest = 0;
    for (std::size_t b = 1; b < node.children.size(); ++b)
        if (node.children[b]->total > node.children[largest]->total) largest = b;
    return route(*node.children[largest], table, row);
}

}  // namespace

Classification classify(const TreeNode& tree, const InformationSystem& table,
                        std::size_t row) {
    const TreeNode* leaf = route(tree, table, row);
    return Classification{leaf->class_label, leaf};
}

PredictionStats tree_accuracy(const TreeNode& tree, const InformationSystem& table) {
    PredictionStats stats;
    stats.total = static_cast<std::int64_t>(table.row_count());
    for (std::size_t row = 0; row < table.row_count(); ++row) {
        const auto result = classify(tree, table, row);
        if (result.label == table.class_label(table.decision_value(row))) ++stats.correct;
    }
    return stats;
}

namespace {

void collect_rules(const TreeNode& node, Rule path, std::vector<Rule>& out) {
    if (node.leaf) {
        path.consequent = node.class_label;
        path.provenance = RuleProvenance::Tree;
        out.push_back(std::move(path));
        return;
    }
    if (node.split_kind == SplitKind::Threshold) {
        Rule left = path;
        left.add_condition(Condition::interval(node.attribute, std::nullopt,
                                               node.threshold, false, true));
        collect_rules(*node.children[0], std::move(left), out);

        Rule right = std::move(path);
        right.add_condition(Condition::interval(node.attribute, node.threshold,
                                                std::nullopt, false, true));
        collect_rules(*node.children[1], std::move(right), out);
    } else {
        for (std::size_t b = 0; b < node.children.size(); ++b) {
            Rule branch = path;
            branch.add_condition(Condition::equals(node.attribute, node.branch_labels[b]));
            collect_rules(*node.children[b], std::move(branch), out);
        }
    }
}

}  // namespace

std::vector<Rule> tree_to_rules(const TreeNode& tree) {
    std::vector<Rule> rules;
    collect_rules(tree, Rule{}, rules);
    return rules;
}

}  // namespace reductminer
