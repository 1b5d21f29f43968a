#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "reductminer/errors.hpp"
#include "reductminer/serialization.hpp"

namespace {

using reductminer::cli::ReportFormat;
using reductminer::cli::RunConfig;

void add_common_flags(CLI::App* cmd, RunConfig& config, bool needs_input = true) {
    auto* input = cmd->add_option("--input", config.input, "input dataset (delimited text)");
    if (needs_input) input->required();
    cmd->add_option("--delimiter", config.delimiter, "field delimiter (default ';')");
    cmd->add_option("--schema", config.schema_path, "schema JSON (decision column, kind overrides)");
    cmd->add_option("--bins", config.bins_path, "binning JSON {attribute: [cuts...]}");
    cmd->add_option("--out", config.out_dir, "directory for the report file");
    std::map<std::string, ReportFormat> formats{{"json", ReportFormat::Json},
                                                {"text", ReportFormat::Text}};
    cmd->add_option("--format", config.format, "report format")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
}

void add_tree_flags(CLI::App* cmd, RunConfig& config, std::string& params_path) {
    cmd->add_option("--min-leaf", config.tree.min_leaf, "minimum records per viable branch");
    cmd->add_option("--min-gain", config.tree.min_gain, "minimum information gain for a split");
    cmd->add_option("--max-depth", config.tree.max_depth, "maximum tree depth");
    cmd->add_option("--params", params_path,
                    "tree parameter JSON file; explicit flags take precedence");
}

// Fields from the params file apply only where no explicit flag was given.
void merge_params_file(const std::string& path, const CLI::App& cmd, RunConfig& config) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(reductminer::read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw reductminer::InputError(std::string("bad params file: ") + e.what());
    }
    if (doc.contains("min_leaf") && cmd.count("--min-leaf") == 0)
        config.tree.min_leaf = doc["min_leaf"].get<std::int64_t>();
    if (doc.contains("min_gain") && cmd.count("--min-gain") == 0)
        config.tree.min_gain = doc["min_gain"].get<double>();
    if (doc.contains("max_depth") && cmd.count("--max-depth") == 0)
        config.tree.max_depth = doc["max_depth"].get<int>();
}

void add_filter_flags(CLI::App* cmd, RunConfig& config) {
    cmd->add_option("--min-confidence", config.min_confidence, "drop rules below this confidence");
    cmd->add_option("--min-support", config.min_support, "drop rules below this support");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rough-set reduction and gain-ratio rule mining over tabular data"};
    app.require_subcommand(1);

    RunConfig config;

    auto* describe = app.add_subcommand("describe", "dataset summary");
    add_common_flags(describe, config);

    auto* reduce = app.add_subcommand("reduce", "discernibility scan, core and reduct search");
    add_common_flags(reduce, config);
    std::map<std::string, reductminer::ScanMode> modes{
        {"absolute", reductminer::ScanMode::Absolute},
        {"decision-relative", reductminer::ScanMode::DecisionRelative}};
    reduce->add_option("--mode", config.mode, "pair comparison mode")
        ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
    reduce->add_option("--check-set", config.check_set,
                       "comma-separated attribute names to verify as a reduct");
    reduce->add_flag("--show-matrix", config.show_matrix,
                     "render the explicit discernibility matrix (small universes only)");

    std::string params_path;

    auto* tree = app.add_subcommand("tree", "gain-ratio decision tree and its rules");
    add_common_flags(tree, config);
    add_tree_flags(tree, config, params_path);
    add_filter_flags(tree, config);

    auto* rules = app.add_subcommand("rules", "evaluate a rule file against a dataset");
    add_common_flags(rules, config);
    rules->add_option("--rules", config.rules_path, "rule JSON file")->required();
    add_filter_flags(rules, config);
    rules->add_flag("--compare", config.compare,
                    "report expected vs computed accuracy for fixture rules");

    auto* eval = app.add_subcommand("eval", "train on one dataset, evaluate on another");
    add_common_flags(eval, config);
    eval->add_option("--test", config.test_input, "holdout dataset")->required();
    eval->add_option("--rules", config.rules_path, "rule JSON file (default: rules from a tree)");
    add_tree_flags(eval, config, params_path);
    eval->add_flag("--compare", config.compare,
                   "report expected vs computed accuracy for fixture rules");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!params_path.empty())
            merge_params_file(params_path, tree->parsed() ? *tree : *eval, config);
        if (describe->parsed()) return reductminer::cli::cmd_describe(config);
        if (reduce->parsed()) return reductminer::cli::cmd_reduce(config);
        if (tree->parsed()) return reductminer::cli::cmd_tree(config);
        if (rules->parsed()) return reductminer::cli::cmd_rules(config);
        if (eval->parsed()) return reductminer::cli::cmd_eval(config);
    } catch (const reductminer::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
