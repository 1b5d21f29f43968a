#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "reductminer/dataset.hpp"

namespace reductminer {

/// One conjunct of a rule antecedent: either an interval over a numeric
/// attribute (each side independently open/closed, either side may be
/// unbounded) or an equality test. Equality values are labels for
/// dictionary-encoded attributes and raw integers for discrete ones, so
/// rules written against one dataset evaluate correctly on another with
/// a different first-appearance code order.
struct Condition {
    enum class Form { Interval, Equals };

    std::string attribute;
    Form form = Form::Interval;

    // Interval form. Defaults give the (a, b] convention.
    std::optional<double> lower;
    std::optional<double> upper;
    bool lower_inclusive = false;
    bool upper_inclusive = true;

    // Equals form.
    std::variant<std::int64_t, std::string> equals_value;

    static Condition interval(std::string attribute, std::optional<double> lower,
                              std::optional<double> upper, bool lower_inclusive = false,
                              bool upper_inclusive = true);
    static Condition equals(std::string attribute, std::string label);
    static Condition equals(std::string attribute, std::int64_t value);

    bool matches_number(double v) const;

    /// Intersects another condition on the same attribute into this one.
    /// Throws InputError if the two cannot be reconciled (different
    /// equality values or mixed forms).
    void merge(const Condition& other);

    std::string describe() const;

    void validate() const;
};

enum class RuleProvenance { RoughSet, Tree, Manual };
const char* to_string(RuleProvenance p);
RuleProvenance rule_provenance_from_string(const std::string& s);

/// Conjunction of conditions (at most one per attribute) implying a
/// decision class, identified by label.
struct Rule {
    std::vector<Condition> conditions;
    std::string consequent;
    RuleProvenance provenance = RuleProvenance::Manual;
    /// Reference accuracy carried by fixture files, for comparison reports.
    std::optional<double> expected_accuracy_pct;

    /// Adds a condition, merging with an existing one on the same attribute.
    void add_condition(const Condition& c);

    std::string describe() const;
};

/// Exact match counts for a rule against a table. Derived ratios are
/// computed from the integers; display strings are rendered by
/// percent_string so every report rounds the same way.
struct RuleMetrics {
    std::int64_t support = 0;
    std::int64_t hits = 0;
    std::int64_t row_count = 0;

    double confidence() const { return support == 0 ? 0.0 : double(hits) / double(support); }
    double coverage() const { return row_count == 0 ? 0.0 : double(support) / double(row_count); }
    double error() const { return support == 0 ? 0.0 : 1.0 - confidence(); }
};

struct EvaluatedRule {
    Rule rule;
    RuleMetrics metrics;
};

/// Counts support and hits with a full scan. A rule with no conditions
/// matches the whole universe. Throws InputError for attributes missing
/// from the table; an equality label absent from a dictionary simply
/// matches nothing. On a binned column an interval condition matches the
/// bins whose whole value range lies inside it, so raw-space rules
/// evaluate exactly against bin-aligned data.
RuleMetrics evaluate_rule(const Rule& rule, const InformationSystem& table);

std::vector<EvaluatedRule> evaluate_rules(const std::vector<Rule>& rules,
                                          const InformationSystem& table);

/// Keeps rules with confidence >= min_confidence and support >= min_support.
std::vector<EvaluatedRule> filter_rules(const std::vector<EvaluatedRule>& rules,
                                        double min_confidence = 0.75,
                                        std::int64_t min_support = 0);

enum class RankKey { Confidence, Support, Lift };

/// Stable descending sort. Lift is confidence over the base rate of the
/// rule's consequent class in the given table.
std::vector<EvaluatedRule> rank_rules(const std::vector<EvaluatedRule>& rules,
                                      RankKey key, const InformationSystem& table);

double rule_lift(const EvaluatedRule& rule, const InformationSystem& table);

/// First matching rule wins; default label when none match.
std::string predict_with_rules(const std::vector<Rule>& rules,
                               const InformationSystem& table, std::size_t row,
                               const std::string& default_label);

struct PredictionStats {
    std::int64_t correct = 0;
    std::int64_t total = 0;
    double accuracy() const { return total == 0 ? 0.0 : double(correct) / double(total); }
};

PredictionStats evaluate_predictions(const std::vector<Rule>& rules,
                                     const InformationSystem& table,
                                     const std::string& default_label);

/// Two-decimal percentage of numer/denom, truncated toward zero so that
/// e.g. 2475/2548 renders "97.13". Always shows two decimals.
std::string percent_string(std::int64_t numer, std::int64_t denom);

}  // namespace reductminer
