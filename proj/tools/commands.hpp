#pragma once

#include <optional>
#include <string>

#include "reductminer/dtree.hpp"
#include "reductminer/roughset.hpp"

namespace reductminer::cli {

enum class ReportFormat { Json, Text };

struct RunConfig {
    std::string input;
    char delimiter = ';';
    std::string schema_path;
    std::string bins_path;
    std::string rules_path;
    std::string test_input;  // eval only
    std::string check_set;   // reduce only: comma-separated attribute names
    ScanMode mode = ScanMode::Absolute;
    TreeParams tree;
    std::optional<double> min_confidence;
    std::optional<std::int64_t> min_support;
    bool compare = false;      // rules: emit expected-vs-computed columns
    bool show_matrix = false;  // reduce: render the explicit matrix
    std::string out_dir;
    ReportFormat format = ReportFormat::Json;
};

int cmd_describe(const RunConfig& config);
int cmd_reduce(const RunConfig& config);
int cmd_tree(const RunConfig& config);
int cmd_rules(const RunConfig& config);
int cmd_eval(const RunConfig& config);

}  // namespace reductminer::cli
