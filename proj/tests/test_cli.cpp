#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

// End-to-end checks of the installed command-line surface: exit codes,
// report shapes, determinism. The binary path comes from the build.

#include <array>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "reductminer/serialization.hpp"
#include "support/synthetic.hpp"

using nlohmann::json;
using testsupport::TempDir;
using testsupport::write_file;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    const std::string command = std::string(RM_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buffer{};
    CliResult result;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::size_t got;
    while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
        result.output.append(buffer.data(), got);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

const char* kToyCsv =
    "\"age\";\"balance\";\"duration\";\"outcome\";\"deposit\"\n"
    "23;100;50;\"unknown\";\"no\"\n"
    "25;-50;100;\"failure\";\"no\"\n"
    "31;300;400;\"success\";\"yes\"\n"
    "44;0;700;\"success\";\"yes\"\n"
    "23;100;50;\"unknown\";\"no\"\n"
    "52;900;250;\"failure\";\"no\"\n";

}  // namespace

TEST_CASE("describe reports rows and attributes, missing files exit 2") {
    TempDir dir;
    auto csv = write_file(dir.file("toy.csv"), kToyCsv);

    CliResult ok = run_cli("describe --input " + csv);
    CHECK(ok.exit_code == 0);
    json doc = json::parse(ok.output);
    CHECK(doc["rows"] == 6);
    CHECK(doc["conditional_attributes"] == 4);
    CHECK(doc["decision"]["distribution"]["no"] == 4);

    CliResult missing = run_cli("describe --input " + dir.file("nope.csv").string());
    CHECK(missing.exit_code == 2);

    CliResult usage = run_cli("describe");
    CHECK(usage.exit_code == 2);

    CliResult badcmd = run_cli("frobnicate");
    CHECK(badcmd.exit_code == 2);
}

TEST_CASE("reduce produces a byte-identical report and honors --check-set") {
    TempDir dir;
    auto csv = write_file(dir.file("toy.csv"), kToyCsv);

    // A key-like column: age+balance+duration distinguish everything, but
    // duration alone is a key here.
    CliResult first = run_cli("reduce --input " + csv + " --check-set duration");
    CHECK(first.exit_code == 0);
    json doc = json::parse(first.output);
    CHECK(doc["check_set"]["verdict"] == "reduct");
    CHECK(doc["scan"]["pair_count"] == 15);
    CHECK(doc["greedy_verdict"] == "reduct");

    CliResult second = run_cli("reduce --input " + csv + " --check-set duration");
    CHECK(second.output == first.output);

    // Written report files are byte-identical too.
    CHECK(run_cli("reduce --input " + csv + " --out " + dir.file("o1").string()).exit_code == 0);
    CHECK(run_cli("reduce --input " + csv + " --out " + dir.file("o2").string()).exit_code == 0);
    CHECK(reductminer::read_text_file(dir.file("o1/reduce.json").string()) ==
          reductminer::read_text_file(dir.file("o2/reduce.json").string()));

    CliResult relative = run_cli("reduce --input " + csv + " --mode decision-relative");
    CHECK(relative.exit_code == 0);
    CHECK(json::parse(relative.output)["mode"] == "decision-relative");

    CliResult matrix = run_cli("reduce --input " + csv + " --show-matrix --format text");
    CHECK(matrix.exit_code == 0);
    CHECK(matrix.output.find("X2") != std::string::npos);
}

TEST_CASE("tree emits ranking, tree, params and rules") {
    TempDir dir;
    auto csv = write_file(dir.file("toy.csv"), kToyCsv);

    CliResult result = run_cli("tree --input " + csv + " --min-leaf 1 --min-gain 0");
    CHECK(result.exit_code == 0);
    json doc = json::parse(result.output);
    CHECK(doc["gain_ratio_table"].size() == 4);
    CHECK(doc["config"]["min_leaf"] == 1);
    CHECK(doc["config"]["max_depth"] == 30);
    CHECK(doc["leaf_count"].get<int>() >= 1);
    CHECK(doc["rules"].size() == doc["leaf_count"].get<std::size_t>());
    CHECK(doc["training_accuracy"] == 1.0);

    // Pure toy dataset: single leaf.
    auto pure = write_file(dir.file("pure.csv"), "a;d\n1;no\n2;no\n");
    json pure_doc = json::parse(run_cli("tree --input " + pure.substr(0)).output);
    CHECK(pure_doc["leaf_count"] == 1);
    CHECK(pure_doc["tree"]["type"] == "leaf");

    // Params file feeds defaults; explicit flags still win.
    auto params = write_file(dir.file("params.json"),
                             R"({"min_leaf": 1, "min_gain": 0, "max_depth": 7})");
    json merged = json::parse(
        run_cli("tree --input " + csv + " --params " + params + " --max-depth 9").output);
    CHECK(merged["config"]["min_leaf"] == 1);
    CHECK(merged["config"]["min_gain"] == 0.0);
    CHECK(merged["config"]["max_depth"] == 9);
}

TEST_CASE("rules evaluates fixtures with binning and comparison") {
    TempDir dir;
    auto csv = write_file(dir.file("toy.csv"), kToyCsv);
    auto bins = write_file(dir.file("bins.json"), R"({"duration": [75.5, 211.5]})");
    auto rules = write_file(dir.file("rules.json"), R"([
      {"conditions": [{"attr": "duration", "op": "le", "value": 75.5}],
       "consequent": "no", "provenance": "manual", "expected_accuracy_pct": 100.0},
      {"conditions": [{"attr": "outcome", "op": "eq", "value": "success"}],
       "consequent": "yes", "provenance": "manual", "expected_accuracy_pct": 50.0}
    ])");

    CliResult result = run_cli("rules --input " + csv + " --rules " + rules + " --compare");
    CHECK(result.exit_code == 0);
    json doc = json::parse(result.output);
    REQUIRE(doc["rules"].size() == 2);
    CHECK(doc["rules"][0]["metrics"]["support"] == 2);
    CHECK(doc["rules"][0]["metrics"]["confidence_pct"] == "100.00");
    CHECK(doc["rules"][0]["comparison"]["reproduced"] == true);
    CHECK(doc["rules"][1]["comparison"]["reproduced"] == false);
    CHECK(doc["rules"][1]["comparison"]["delta_pp"] == doctest::Approx(50.0));

    // An empty rule file is a valid, empty report.
    auto empty = write_file(dir.file("empty.json"), "[]");
    CliResult none = run_cli("rules --input " + csv + " --rules " + empty);
    CHECK(none.exit_code == 0);
    CHECK(json::parse(none.output)["rule_count"] == 0);

    // Unknown attribute in a rule: input error.
    auto bad = write_file(dir.file("bad.json"), R"([
      {"conditions": [{"attr": "ghost", "op": "le", "value": 1}], "consequent": "no"}
    ])");
    CHECK(run_cli("rules --input " + csv + " --rules " + bad).exit_code == 2);

    // Rules applied to binned data.
    CliResult binned = run_cli("rules --input " + csv + " --rules " + empty + " --bins " + bins);
    CHECK(binned.exit_code == 0);
}

TEST_CASE("eval compares train and holdout metrics") {
    TempDir dir;
    auto csv = write_file(dir.file("toy.csv"), kToyCsv);

    // Same set on both sides: metrics match and accuracy is the training one.
    CliResult result = run_cli("eval --input " + csv + " --test " + csv +
                               " --min-leaf 1 --min-gain 0");
    CHECK(result.exit_code == 0);
    json doc = json::parse(result.output);
    CHECK(doc["rule_source"] == "tree");
    CHECK(doc["prediction_accuracy_train"] ==
          doc["prediction_accuracy_test"]);
    for (const auto& rule : doc["rules"]) {
        CHECK(rule["train"]["support"] == rule["test"]["support"]);
        CHECK(rule["confidence_delta"] == 0.0);
    }

    // Disjoint schemas: schema-mismatch error.
    auto other = write_file(dir.file("other.csv"), "x;y;d\n1;2;no\n3;4;yes\n");
    CliResult mismatch =
        run_cli("eval --input " + csv + " --test " + other + " --min-leaf 1 --min-gain 0");
    CHECK(mismatch.exit_code == 2);
}
