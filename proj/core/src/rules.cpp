#include "reductminer/rules.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace reductminer {

const char* to_string(RuleProvenance p) {
    switch (p) {
        case RuleProvenance::RoughSet: return "roughset";
        case RuleProvenance::Tree: return "tree";
        case RuleProvenance::Manual: return "manual";
    }
    return "?";
}

RuleProvenance rule_provenance_from_string(const std::string& s) {
    if (s == "roughset") return RuleProvenance::RoughSet;
    if (s == "tree") return RuleProvenance::Tree;
    if (s == "manual") return RuleProvenance::Manual;
    throw InputError("unknown rule provenance: " + s);
}

Condition Condition::interval(std::string attribute, std::optional<double> lower,
                              std::optional<double> upper, bool lower_inclusive,
                              bool upper_inclusive) {
    Condition c;
    c.attribute = std::move(attribute);
    c.form = Form::Interval;
    c.lower = lower;
    c.upper = upper;
    c.lower_inclusive = lower_inclusive;
    c.upper_inclusive = upper_inclusive;
    c.validate();
    return c;
}

Condition Condition::equals(std::string attribute, std::string label) {
    Condition c;
    c.attribute = std::move(attribute);
    c.form = Form::Equals;
    c.equals_value = std::move(label);
    return c;
}

Condition Condition::equals(std::string attribute, std::int64_t value) {
    Condition c;
    c.attribute = std::move(attribute);
    c.form = Form::Equals;
    c.equals_value = value;
    return c;
}

void Condition::validate() const {
    if (form == Form::Interval) {
        if (!lower && !upper)
            throw InputError("interval condition on " + attribute + " has no bounds");
        if (lower && upper && !(*lower < *upper))
            throw InputError("interval condition on " + attribute +
                             " has lower >= upper");
    }
}

bool Condition::matches_number(double v) const {
    if (lower) {
        if (lower_inclusive ? v < *lower : v <= *lower) return false;
    }
    if (upper) {
        if (upper_inclusive ? v > *upper : v >= *upper) return false;
    }
    return true;
}

void Condition::merge(const Condition& other) {
    if (attribute != other.attribute)
        throw std::logic_error("merging conditions on different attributes");
    if (form != other.form)
        throw InputError("conflicting condition forms on attribute " + attribute);
    if (form == Form::Equals) {
        if (equals_value != other.equals_value)
            throw InputError("contradictory equality conditions on attribute " + attribute);
        return;
    }
    // Intersection: the binding bound is the tighter one; on equal
    // values the exclusive side wins.
    if (other.lower) {
        if (!lower || *other.lower > *lower) {
            lower = other.lower;
            lower_inclusive = other.lower_inclusive;
        } else if (*other.lower == *lower) {
            lower_inclusive = lower_inclusive && other.lower_inclusive;
        }
    }
    if (other.upper) {
        if (!upper || *other.upper < *upper) {
            upper = other.upper;
            upper_inclusive = other.upper_inclusive;
        } else if (*other.upper == *upper) {
            upper_inclusive = upper_inclusive && other.upper_inclusive;
        }
    }
    validate();
}

namespace {

std::string number_text(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

std::string Condition::describe() const {
    std::ostringstream out;
    if (form == Form::Equals) {
        out << attribute << " = ";
        if (std::holds_alternative<std::string>(equals_value))
            out << std::get<std::string>(equals_value);
        else
            out << std::get<std::int64_t>(equals_value);
        return out.str();
    }
    if (lower && upper) {
        out << number_text(*lower) << (lower_inclusive ? " <= " : " < ") << attribute
            << (upper_inclusive ? " <= " : " < ") << number_text(*upper);
    } else if (upper) {
        out << attribute << (upper_inclusive ? " <= " : " < ") << number_text(*upper);
    } else {
        out << attribute << (lower_inclusive ? " >= " : " > ") << number_text(*lower);
    }
    return out.str();
}

void Rule::add_condition(const Condition& c) {
    for (auto& existing : conditions) {
        if (existing.attribute == c.attribute) {
            existing.merge(c);
            return;
        }
    }
    conditions.push_back(c);
}

std::string Rule::describe() const {
    std::ostringstream out;
    out << "if ";
    if (conditions.empty()) out << "(true)";
    for (std::size_t i = 0; i < conditions.size(); ++i) {
        if (i > 0) out << " and ";
        out << "(" << conditions[i].describe() << ")";
    }
    out << " then " << consequent;
    return out.str();
}

namespace {

// A condition resolved against one table: column index plus a closed
// predicate over the encoded cell value. On binned columns an interval
// condition matches a cell when the whole bin range lies inside the
// condition interval, so rules written in raw value space evaluate
// exactly against bin-aligned data.
struct CompiledCondition {
    enum class Kind { EqualsCode, IntervalRaw, IntervalBinned };

    int column = -1;
    Kind kind = Kind::IntervalRaw;
    const Condition* condition = nullptr;
    std::int64_t equals_code = 0;     // EqualsCode; -1 means "matches nothing"
    std::vector<char> bin_match;      // IntervalBinned, indexed by bin

    bool matches(const InformationSystem& table, std::size_t row) const {
        const std::int64_t v = table.value(row, column);
        switch (kind) {
            case Kind::EqualsCode: return v == equals_code;
            case Kind::IntervalRaw: return condition->matches_number(double(v));
            case Kind::IntervalBinned:
                return v >= 0 && v < static_cast<std::int64_t>(bin_match.size()) &&
                       bin_match[static_cast<std::size_t>(v)] != 0;
        }
        return false;
    }
};

// bin ⊆ condition interval, with the bin's (lo, hi] convention.
bool bin_inside(const Condition& c, std::optional<double> bin_lo,
                std::optional<double> bin_hi) {
    if (c.lower) {
        if (!bin_lo) return false;
        if (*bin_lo < *c.lower) return false;
    }
    if (c.upper) {
        if (!bin_hi) return false;
        if (*bin_hi > *c.upper) return false;
        if (*bin_hi == *c.upper && !c.upper_inclusive) return false;
    }
    return true;
}

std::vector<CompiledCondition> compile(const Rule& rule, const InformationSystem& table) {
    std::vector<CompiledCondition> compiled;
    compiled.reserve(rule.conditions.size());
    for (const auto& condition : rule.conditions) {
        CompiledCondition cc;
        cc.column = table.attribute_index(condition.attribute);
        cc.condition = &condition;
        const AttributeDescriptor& desc = table.attribute(cc.column);
        if (condition.form == Condition::Form::Equals) {
            cc.kind = CompiledCondition::Kind::EqualsCode;
            if (std::holds_alternative<std::string>(condition.equals_value)) {
                const std::string& label = std::get<std::string>(condition.equals_value);
                cc.equals_code = -1;
                for (std::size_t i = 0; i < desc.dictionary.size(); ++i)
                    if (desc.dictionary[i] == label) {
                        cc.equals_code = static_cast<std::int64_t>(i);
                        break;
                    }
                if (!desc.has_dictionary())
                    throw InputError("equality label '" + label + "' used on numeric attribute " +
                                     desc.name);
            } else {
                if (desc.has_dictionary())
                    throw InputError("numeric equality used on categorical attribute " +
                                     desc.name);
                if (desc.kind == AttributeKind::Continuous)
                    throw InputError("equality condition on continuous attribute " +
                                     desc.name + "; use an interval");
                cc.equals_code = std::get<std::int64_t>(condition.equals_value);
            }
        } else {
            if (desc.has_dictionary())
                throw InputError("interval condition used on categorical attribute " +
                                 desc.name);
            if (desc.is_binned()) {
                cc.kind = CompiledCondition::Kind::IntervalBinned;
                BinningSpec spec(desc.name, desc.bin_cuts);
                for (int b = 0; b < spec.bin_count(); ++b) {
                    auto [lo, hi] = spec.bin_bounds(b);
                    cc.bin_match.push_back(bin_inside(condition, lo, hi) ? 1 : 0);
                }
            }
        }
        compiled.push_back(cc);
    }
    return compiled;
}

}  // namespace

RuleMetrics evaluate_rule(const Rule& rule, const InformationSystem& table) {
    const auto compiled = compile(rule, table);
    const std::int64_t consequent_code = table.class_code(rule.consequent);

    RuleMetrics metrics;
    metrics.row_count = static_cast<std::int64_t>(table.row_count());
    for (std::size_t row = 0; row < table.row_count(); ++row) {
        bool match = true;
        for (const auto& cc : compiled)
            if (!cc.matches(table, row)) {
                match = false;
                break;
            }
        if (!match) continue;
        ++metrics.support;
        if (table.decision_value(row) == consequent_code) ++metrics.hits;
    }
    return metrics;
}

std::vector<EvaluatedRule> evaluate_rules(const std::vector<Rule>& rules,
                                          const InformationSystem& table) {
    std::vector<EvaluatedRule> out;
    out.reserve(rules.size());
    for (const auto& rule : rules) out.push_back({rule, evaluate_rule(rule, table)});
    return out;
}

std::vector<EvaluatedRule> filter_rules(const std::vector<EvaluatedRule>& rules,
                                        double min_confidence, std::int64_t min_support) {
    std::vector<EvaluatedRule> out;
    for (const auto& r : rules)
        if (r.metrics.confidence() >= min_confidence && r.metrics.support >= min_support)
            out.push_back(r);
    return out;
}

double rule_lift(const EvaluatedRule& rule, const InformationSystem& table) {
    const std::int64_t code = table.class_code(rule.rule.consequent);
    if (code < 0) return 0.0;
    const auto counts = table.class_distribution();
    const double base =
        double(counts[static_cast<std::size_t>(code)]) / double(table.row_count());
    return base == 0.0 ? 0.0 : rule.metrics.confidence() / base;
}

std::vector<EvaluatedRule> rank_rules(const std::vector<EvaluatedRule>& rules, RankKey key,
                                      const InformationSystem& table) {
    std::vector<EvaluatedRule> out = rules;
    auto value = [&](const EvaluatedRule& r) -> double {
        switch (key) {
            case RankKey::Confidence: return r.metrics.confidence();
            case RankKey::Support: return double(r.metrics.support);
            case RankKey::Lift: return rule_lift(r, table);
        }
        return 0.0;
    };
    std::stable_sort(out.begin(), out.end(),
                     [&](const EvaluatedRule& a, const EvaluatedRule& b) {
                         return value(a) > value(b);
                     });
    return out;
}

std::string predict_with_rules(const std::vector<Rule>& rules,
                               const InformationSystem& table, std::size_t row,
                               const std::string& default_label) {
    for (const auto& rule : rules) {
        const auto compiled = compile(rule, table);
        bool match = true;
        for (const auto& cc : compiled)
            if (!cc.matches(table, row)) {
                match = false;
                break;
            }
        if (match) return rule.consequent;
    }
    return default_label;
}

PredictionStats evaluate_predictions(const std::vector<Rule>& rules,
                                     const InformationSystem& table,
                                     const std::string& default_label) {
    // Compile once, scan once.
    std::vector<std::vector<CompiledCondition>> compiled;
    compiled.reserve(rules.size());
    for (const auto& rule : rules) compiled.push_back(compile(rule, table));

    PredictionStats stats;
    stats.total = static_cast<std::int64_t>(table.row_count());
    for (std::size_t row = 0; row < table.row_count(); ++row) {
        const std::string* predicted = &default_label;
        for (std::size_t r = 0; r < rules.size(); ++r) {
            bool match = true;
            for (const auto& cc : compiled[r])
                if (!cc.matches(table, row)) {
                    match = false;
                    break;
                }
            if (match) {
                predicted = &rules[r].consequent;
                break;
            }
        }
        if (*predicted == table.class_label(table.decision_value(row))) ++stats.correct;
    }
    return stats;
}

std::string percent_string(std::int64_t numer, std::int64_t denom) {
    if (denom <= 0) return "0.00";
    if (numer < 0) numer = 0;
    // Truncated hundredths of a percent, kept in integer arithmetic.
    const std::int64_t scaled = numer * 10000 / denom;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld.%02lld",
                  static_cast<long long>(scaled / 100),
                  static_cast<long long>(scaled % 100));
    return buf;
}

}  // namespace reductminer
