#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "reductminer/serialization.hpp"

namespace reductminer::cli {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

InformationSystem load_input(const RunConfig& config, const std::string& path) {
    LoadOptions options;
    options.delimiter = config.delimiter;
    if (!config.schema_path.empty()) options.schema = schema_from_file(config.schema_path);
    InformationSystem table = load_csv(path, options);
    if (!config.bins_path.empty())
        return apply_binning(table, binning_specs_from_file(config.bins_path));
    return table;
}

ojson config_json(const RunConfig& config, const std::string& command) {
    ojson doc;
    doc["command"] = command;
    doc["input"] = config.input;
    doc["delimiter"] = std::string(1, config.delimiter);
    if (!config.schema_path.empty()) doc["schema"] = config.schema_path;
    if (!config.bins_path.empty()) doc["bins"] = config.bins_path;
    if (!config.rules_path.empty()) doc["rules"] = config.rules_path;
    if (!config.test_input.empty()) doc["test"] = config.test_input;
    if (command == "reduce") doc["mode"] = to_string(config.mode);
    if (command == "tree" || command == "eval") {
        doc["min_leaf"] = config.tree.min_leaf;
        doc["min_gain"] = config.tree.min_gain;
        doc["max_depth"] = config.tree.max_depth;
    }
    if (config.min_confidence) doc["min_confidence"] = *config.min_confidence;
    if (config.min_support) doc["min_support"] = *config.min_support;
    return doc;
}

// Every report embeds the configuration it was produced with plus a
// short digest of it, so runs are comparable at a glance.
void stamp(ojson& report, const RunConfig& config, const std::string& command) {
    ojson cfg = config_json(config, command);
    report["config"] = cfg;
    report["config_digest"] = fnv1a_hex(cfg.dump());
}

int emit(const ojson& report, const std::string& text_rendering, const RunConfig& config,
         const std::string& command) {
    const std::string json_text = report.dump(2) + "\n";
    if (config.format == ReportFormat::Json)
        std::cout << json_text;
    else
        std::cout << text_rendering;

    if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        const auto base = std::filesystem::path(config.out_dir) / command;
        if (config.format == ReportFormat::Json)
            write_text_file((base.string() + ".json"), json_text);
        else
            write_text_file((base.string() + ".txt"), text_rendering);
    }
    return 0;
}

ojson comparison_json(const EvaluatedRule& rule) {
    ojson doc;
    doc["expected_pct"] = *rule.rule.expected_accuracy_pct;
    const double computed =
        rule.metrics.support == 0
            ? 0.0
            : 100.0 * double(rule.metrics.hits) / double(rule.metrics.support);
    doc["computed_pct"] = computed;
    doc["computed_pct_display"] = percent_string(rule.metrics.hits, rule.metrics.support);
    const double delta = computed - *rule.rule.expected_accuracy_pct;
    doc["delta_pp"] = delta;
    doc["reproduced"] = std::fabs(delta) <= 0.5;
    return doc;
}

}  // namespace

int cmd_describe(const RunConfig& config) {
    InformationSystem table = load_input(config, config.input);
    DatasetSummary summary = describe(table);
    ojson report = summary_to_json(summary);
    stamp(report, config, "describe");
    return emit(report, summary_to_text(summary), config, "describe");
}

int cmd_reduce(const RunConfig& config) {
    const auto started = Clock::now();
    InformationSystem table = load_input(config, config.input);

    DiscernibilitySummary scan = discernibility_scan(table, table.all_attributes(), config.mode);
    AttributeSet reduct = greedy_reduct(table, config.mode);

    ojson report;
    report["mode"] = to_string(config.mode);
    report["scan"] = scan_to_json(scan, table);
    report["greedy_reduct"] = attribute_names(table, reduct);
    report["greedy_verdict"] =
        reduct.empty() ? "empty"
                       : to_string(is_reduct(table, reduct, table.all_attributes(), config.mode));

    std::ostringstream text;
    text << "mode:   " << to_string(config.mode) << "\n";
    text << "pairs:  " << scan.pair_count << "\n";
    text << "core:  ";
    for (const auto& name : attribute_names(table, scan.core)) text << " " << name;
    text << "\nreduct:";
    for (const auto& name : attribute_names(table, reduct)) text << " " << name;
    text << "\nverdict: " << report["greedy_verdict"].get<std::string>() << "\n";

    if (!config.check_set.empty()) {
        std::vector<std::string> names;
        std::stringstream split(config.check_set);
        std::string item;
        while (std::getline(split, item, ','))
            if (!item.empty()) names.push_back(item);
        AttributeSet candidate = attribute_set_from_names(table, names);
        ReductVerdict verdict = is_reduct(table, candidate, table.all_attributes(), config.mode);
        ojson check;
        check["attributes"] = names;
        check["verdict"] = to_string(verdict);
        report["check_set"] = std::move(check);
        text << "check_set {" << config.check_set << "}: " << to_string(verdict) << "\n";
    }

    std::string matrix_text;
    if (config.show_matrix) {
        DiscernibilityMatrix matrix = materialize_matrix(table, table.all_attributes(), config.mode);
        matrix_text = matrix_to_text(matrix, table);
        text << "\n" << matrix_text;
        report["matrix_text"] = matrix_text;
    }

    stamp(report, config, "reduce");
    // Timing goes to stderr so the report itself stays byte-stable.
    std::cerr << "reduce completed in " << elapsed_ms(started) << " ms\n";
    return emit(report, text.str(), config, "reduce");
}

int cmd_tree(const RunConfig& config) {
    InformationSystem table = load_input(config, config.input);

    std::vector<GainRatioEntry> ranking = gain_ratio_table(table, config.tree);
    auto tree = build_tree(table, config.tree);
    std::vector<Rule> rules = tree_to_rules(*tree);
    std::vector<EvaluatedRule> evaluated = evaluate_rules(rules, table);
    if (config.min_confidence || config.min_support)
        evaluated = filter_rules(evaluated, config.min_confidence.value_or(0.0),
                                 config.min_support.value_or(0));

    ojson report;
    report["gain_ratio_table"] = gain_ratio_table_to_json(ranking);
    report["leaf_count"] = tree->leaf_count();
    report["node_count"] = tree->node_count();
    report["training_accuracy"] = tree_accuracy(*tree, table).accuracy();
    report["tree"] = tree_to_json(*tree);
    ojson rule_list = ojson::array();
    for (const auto& r : evaluated) rule_list.push_back(evaluated_rule_to_json(r, table));
    report["rules"] = std::move(rule_list);
    stamp(report, config, "tree");

    std::ostringstream text;
    text << gain_ratio_table_to_text(ranking) << "\n"
         << "leaves: " << tree->leaf_count() << "  nodes: " << tree->node_count() << "\n\n"
         << tree_to_text(*tree) << "\n"
         << rules_to_text(evaluated);
    return emit(report, text.str(), config, "tree");
}

int cmd_rules(const RunConfig& config) {
    InformationSystem table = load_input(config, config.input);
    std::vector<Rule> rules;
    if (!config.rules_path.empty()) rules = rules_from_file(config.rules_path);

    std::vector<EvaluatedRule> evaluated = evaluate_rules(rules, table);
    if (config.min_confidence || config.min_support)
        evaluated = filter_rules(evaluated, config.min_confidence.value_or(0.0),
                                 config.min_support.value_or(0));

    ojson report;
    ojson rule_list = ojson::array();
    for (const auto& r : evaluated) {
        ojson item = evaluated_rule_to_json(r, table);
        if (config.compare && r.rule.expected_accuracy_pct)
            item["comparison"] = comparison_json(r);
        rule_list.push_back(std::move(item));
    }
    report["rules"] = std::move(rule_list);
    report["rule_count"] = evaluated.size();
    stamp(report, config, "rules");

    return emit(report, rules_to_text(evaluated), config, "rules");
}

int cmd_eval(const RunConfig& config) {
    InformationSystem train = load_input(config, config.input);
    InformationSystem holdout = load_input(config, config.test_input);

    std::vector<Rule> rules;
    std::string rule_source;
    if (!config.rules_path.empty()) {
        rules = rules_from_file(config.rules_path);
        rule_source = "file";
    } else {
        auto tree = build_tree(train, config.tree);
        rules = tree_to_rules(*tree);
        rule_source = "tree";
    }

    // Majority class of the training set backs any uncovered record.
    const auto train_counts = train.class_distribution();
    std::size_t majority = 0;
    for (std::size_t c = 1; c < train_counts.size(); ++c)
        if (train_counts[c] > train_counts[majority]) majority = c;
    const std::string default_label = train.decision().dictionary[majority];

    ojson report;
    report["rule_source"] = rule_source;
    report["default_class"] = default_label;
    ojson rule_list = ojson::array();
    for (const auto& rule : rules) {
        EvaluatedRule on_train{rule, evaluate_rule(rule, train)};
        EvaluatedRule on_test{rule, evaluate_rule(rule, holdout)};
        ojson item = rule_to_json(rule);
        item["text"] = rule.describe();
        ojson train_metrics;
        train_metrics["support"] = on_train.metrics.support;
        train_metrics["hits"] = on_train.metrics.hits;
        train_metrics["confidence_pct"] =
            percent_string(on_train.metrics.hits, on_train.metrics.support);
        ojson test_metrics;
        test_metrics["support"] = on_test.metrics.support;
        test_metrics["hits"] = on_test.metrics.hits;
        test_metrics["confidence_pct"] =
            percent_string(on_test.metrics.hits, on_test.metrics.support);
        item["train"] = std::move(train_metrics);
        item["test"] = std::move(test_metrics);
        item["confidence_delta"] =
            on_test.metrics.confidence() - on_train.metrics.confidence();
        if (config.compare && rule.expected_accuracy_pct) {
            item["comparison_train"] = comparison_json(on_train);
            item["comparison_test"] = comparison_json(on_test);
        }
        rule_list.push_back(std::move(item));
    }
    report["rules"] = std::move(rule_list);
    report["prediction_accuracy_train"] =
        evaluate_predictions(rules, train, default_label).accuracy();
    report["prediction_accuracy_test"] =
        evaluate_predictions(rules, holdout, default_label).accuracy();
    stamp(report, config, "eval");

    std::ostringstream text;
    text << "rules from " << rule_source << ", default class " << default_label << "\n";
    for (const auto& item : report["rules"])
        text << item["text"].get<std::string>() << "  train "
             << item["train"]["confidence_pct"].get<std::string>() << "%  test "
             << item["test"]["confidence_pct"].get<std::string>() << "%\n";
    text << "prediction accuracy: train "
         << report["prediction_accuracy_train"].get<double>() << ", test "
         << report["prediction_accuracy_test"].get<double>() << "\n";
    return emit(report, text.str(), config, "eval");
}

}  // namespace reductminer::cli
