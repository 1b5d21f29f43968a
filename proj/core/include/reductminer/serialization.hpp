#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "reductminer/dataset.hpp"
#include "reductminer/dtree.hpp"
#include "reductminer/roughset.hpp"
#include "reductminer/rules.hpp"

namespace reductminer {

using ojson = nlohmann::ordered_json;

std::vector<std::string> attribute_names(const InformationSystem& table, AttributeSet s);
AttributeSet attribute_set_from_names(const InformationSystem& table,
                                      const std::vector<std::string>& names);

ojson summary_to_json(const DatasetSummary& summary);
std::string summary_to_text(const DatasetSummary& summary);

ojson scan_to_json(const DiscernibilitySummary& scan, const InformationSystem& table);

ojson rule_to_json(const Rule& rule);
ojson evaluated_rule_to_json(const EvaluatedRule& rule, const InformationSystem& table);
std::string rules_to_text(const std::vector<EvaluatedRule>& rules);

/// Parses a rule document: either a bare array or {"rules": [...]}.
/// Conditions use {attr, op in {le, lt, gt, ge, eq, in_range}, ...}.
std::vector<Rule> rules_from_json(const std::string& text);
std::vector<Rule> rules_from_file(const std::string& path);
ojson rules_to_json(const std::vector<Rule>& rules);

ojson tree_to_json(const TreeNode& node);
/// Indented one-test-per-line rendering of the tree.
std::string tree_to_text(const TreeNode& node);

ojson gain_ratio_table_to_json(const std::vector<GainRatioEntry>& entries);
std::string gain_ratio_table_to_text(const std::vector<GainRatioEntry>& entries);

/// Fig.-2-style text table of an explicit discernibility matrix: one row
/// per object, attribute-name lists per cell, truncated with "..." past
/// cell_width.
std::string matrix_to_text(const DiscernibilityMatrix& matrix,
                           const InformationSystem& table,
                           std::size_t max_objects = 20,
                           std::size_t cell_width = 18);

/// FNV-1a 64-bit digest, hex-encoded; used to stamp reports with the
/// configuration that produced them.
std::string fnv1a_hex(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace reductminer
