#include "reductminer/serialization.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace reductminer {

std::vector<std::string> attribute_names(const InformationSystem& table, AttributeSet s) {
    std::vector<std::string> names;
    s.for_each([&](int a) { names.push_back(table.attribute(a).name); });
    return names;
}

AttributeSet attribute_set_from_names(const InformationSystem& table,
                                      const std::vector<std::string>& names) {
    AttributeSet s;
    for (const auto& name : names) s.add(table.attribute_index(name));
    return s;
}

ojson summary_to_json(const DatasetSummary& summary) {
    ojson doc;
    doc["rows"] = summary.rows;
    doc["conditional_attributes"] = summary.attributes.size();
    ojson attrs = ojson::array();
    for (const auto& a : summary.attributes) {
        ojson item;
        item["name"] = a.name;
        item["kind"] = to_string(a.kind);
        item["distinct"] = a.distinct;
        if (a.min) item["min"] = *a.min;
        if (a.max) item["max"] = *a.max;
        if (!a.dictionary.empty()) item["dictionary"] = a.dictionary;
        attrs.push_back(std::move(item));
    }
    doc["attributes"] = std::move(attrs);
    ojson decision;
    decision["name"] = summary.decision_name;
    decision["kind"] = to_string(summary.decision_kind);
    ojson dist;
    for (const auto& [label, count] : summary.class_distribution) dist[label] = count;
    decision["distribution"] = std::move(dist);
    doc["decision"] = std::move(decision);
    return doc;
}

std::string summary_to_text(const DatasetSummary& summary) {
    std::ostringstream out;
    out << "rows: " << summary.rows << "\n";
    out << "conditional attributes: " << summary.attributes.size() << "\n\n";
    out << std::left << std::setw(14) << "name" << std::setw(13) << "kind"
        << std::setw(10) << "distinct" << "range / values\n";
    for (const auto& a : summary.attributes) {
        out << std::left << std::setw(14) << a.name << std::setw(13) << to_string(a.kind)
            << std::setw(10) << a.distinct;
        if (a.min)
            out << "[" << *a.min << ", " << *a.max << "]";
        else {
            for (std::size_t i = 0; i < a.dictionary.size(); ++i)
                out << (i ? "," : "") << a.dictionary[i];
        }
        out << "\n";
    }
    out << "\ndecision " << summary.decision_name << ":";
    for (const auto& [label, count] : summary.class_distribution)
        out << " " << label << "=" << count;
    out << "\n";
    return out.str();
}

ojson scan_to_json(const DiscernibilitySummary& scan, const InformationSystem& table) {
    ojson doc;
    doc["mode"] = to_string(scan.mode);
    doc["pair_count"] = scan.pair_count;
    doc["singleton_pair_count"] = scan.singleton_pair_count;
    doc["core"] = attribute_names(table, scan.core);
    ojson hist;
    scan.scanned.for_each([&](int a) {
        hist[table.attribute(a).name] = scan.entry_histogram[static_cast<std::size_t>(a)];
    });
    doc["entry_histogram"] = std::move(hist);
    return doc;
}

namespace {

ojson condition_to_json(const Condition& c) {
    ojson doc;
    doc["attr"] = c.attribute;
    if (c.form == Condition::Form::Equals) {
        doc["op"] = "eq";
        if (std::holds_alternative<std::string>(c.equals_value))
            doc["value"] = std::get<std::string>(c.equals_value);
        else
            doc["value"] = std::get<std::int64_t>(c.equals_value);
        return doc;
    }
    if (c.lower && c.upper) {
        doc["op"] = "in_range";
        doc["lower"] = *c.lower;
        doc["upper"] = *c.upper;
        doc["lower_inclusive"] = c.lower_inclusive;
        doc["upper_inclusive"] = c.upper_inclusive;
    } else if (c.upper) {
        doc["op"] = c.upper_inclusive ? "le" : "lt";
        doc["value"] = *c.upper;
    } else {
        doc["op"] = c.lower_inclusive ? "ge" : "gt";
        doc["value"] = *c.lower;
    }
    return doc;
}

Condition condition_from_json(const nlohmann::json& doc) {
    if (!doc.contains("attr") || !doc.contains("op"))
        throw InputError("rule condition needs 'attr' and 'op'");
    const std::string attr = doc["attr"].get<std::string>();
    const std::string op = doc["op"].get<std::string>();
    auto need_number = [&](const char* field) -> double {
        if (!doc.contains(field) || !doc[field].is_number())
            throw InputError("condition op '" + op + "' on " + attr +
                             " needs numeric '" + field + "'");
        return doc[field].get<double>();
    };
    if (op == "eq") {
        if (!doc.contains("value")) throw InputError("eq condition needs 'value'");
        if (doc["value"].is_string())
            return Condition::equals(attr, doc["value"].get<std::string>());
        if (doc["value"].is_number_integer())
            return Condition::equals(attr, doc["value"].get<std::int64_t>());
        throw InputError("eq value for " + attr + " must be a string or integer");
    }
    if (op == "le") return Condition::interval(attr, std::nullopt, need_number("value"), false, true);
    if (op == "lt") return Condition::interval(attr, std::nullopt, need_number("value"), false, false);
    if (op == "gt") return Condition::interval(attr, need_number("value"), std::nullopt, false, true);
    if (op == "ge") return Condition::interval(attr, need_number("value"), std::nullopt, true, true);
    if (op == "in_range") {
        const double lo = need_number("lower");
        const double hi = need_number("upper");
        const bool lo_inc = doc.value("lower_inclusive", false);
        const bool hi_inc = doc.value("upper_inclusive", true);
        return Condition::interval(attr, lo, hi, lo_inc, hi_inc);
    }
    throw InputError("unknown condition op: " + op);
}

}  // namespace

ojson rule_to_json(const Rule& rule) {
    ojson doc;
    ojson conditions = ojson::array();
    for (const auto& c : rule.conditions) conditions.push_back(condition_to_json(c));
    doc["conditions"] = std::move(conditions);
    doc["consequent"] = rule.consequent;
    doc["provenance"] = to_string(rule.provenance);
    if (rule.expected_accuracy_pct) doc["expected_accuracy_pct"] = *rule.expected_accuracy_pct;
    return doc;
}

ojson evaluated_rule_to_json(const EvaluatedRule& rule, const InformationSystem& table) {
    ojson doc = rule_to_json(rule.rule);
    doc["text"] = rule.rule.describe();
    ojson metrics;
    metrics["support"] = rule.metrics.support;
    metrics["hits"] = rule.metrics.hits;
    metrics["confidence"] = rule.metrics.confidence();
    metrics["confidence_pct"] = percent_string(rule.metrics.hits, rule.metrics.support);
    metrics["coverage"] = rule.metrics.coverage();
    metrics["error"] = rule.metrics.error();
    metrics["lift"] = rule_lift(rule, table);
    doc["metrics"] = std::move(metrics);
    return doc;
}

std::string rules_to_text(const std::vector<EvaluatedRule>& rules) {
    std::ostringstream out;
    std::size_t width = 0;
    for (const auto& r : rules) width = std::max(width, r.rule.describe().size());
    for (const auto& r : rules) {
        out << std::left << std::setw(static_cast<int>(width) + 2) << r.rule.describe()
            << "support " << std::setw(8) << r.metrics.support << "hits " << std::setw(8)
            << r.metrics.hits << "confidence " << std::setw(8)
            << (percent_string(r.metrics.hits, r.metrics.support) + "%")
            << "coverage " << percent_string(r.metrics.support, r.metrics.row_count)
            << "%\n";
    }
    return out.str();
}

std::vector<Rule> rules_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("bad rule document: ") + e.what());
    }
    const nlohmann::json* list = &doc;
    if (doc.is_object()) {
        if (!doc.contains("rules")) throw InputError("rule document has no 'rules' array");
        list = &doc["rules"];
    }
    if (!list->is_array()) throw InputError("rule document must be an array of rules");

    std::vector<Rule> rules;
    for (const auto& item : *list) {
        Rule rule;
        if (!item.contains("consequent"))
            throw InputError("rule is missing its consequent");
        rule.consequent = item["consequent"].get<std::string>();
        if (item.contains("provenance"))
            rule.provenance = rule_provenance_from_string(item["provenance"].get<std::string>());
        if (item.contains("expected_accuracy_pct"))
            rule.expected_accuracy_pct = item["expected_accuracy_pct"].get<double>();
        if (item.contains("conditions"))
            for (const auto& c : item["conditions"]) rule.add_condition(condition_from_json(c));
        rules.push_back(std::move(rule));
    }
    return rules;
}

std::vector<Rule> rules_from_file(const std::string& path) {
    return rules_from_json(read_text_file(path));
}

ojson rules_to_json(const std::vector<Rule>& rules) {
    ojson arr = ojson::array();
    for (const auto& rule : rules) arr.push_back(rule_to_json(rule));
    return arr;
}

ojson tree_to_json(const TreeNode& node) {
    ojson doc;
    if (node.leaf) {
        doc["type"] = "leaf";
        doc["class"] = node.class_label;
        doc["total"] = node.total;
        doc["class_counts"] = node.class_counts;
        return doc;
    }
    doc["type"] = "split";
    doc["attribute"] = node.attribute;
    doc["split"] = node.split_kind == SplitKind::Threshold ? "threshold" : "categorical";
    if (node.split_kind == SplitKind::Threshold) doc["threshold"] = node.threshold;
    doc["total"] = node.total;
    ojson branches = ojson::array();
    for (std::size_t b = 0; b < node.children.size(); ++b) {
        ojson branch;
        branch["label"] = node.branch_labels[b];
        branch["child"] = tree_to_json(*node.children[b]);
        branches.push_back(std::move(branch));
    }
    doc["branches"] = std::move(branches);
    return doc;
}

namespace {

void render_tree(const TreeNode& node, const std::string& prefix, std::ostringstream& out) {
    for (std::size_t b = 0; b < node.children.size(); ++b) {
        const TreeNode& child = *node.children[b];
        out << prefix << node.attribute
            << (node.split_kind == SplitKind::Categorical ? " = " : " ")
            << node.branch_labels[b];
        if (child.leaf) {
            // "(total/misclassified)", the misclassified part only when nonzero
            std::int64_t majority = 0;
            for (std::int64_t n : child.class_counts) majority = std::max(majority, n);
            out << ": " << child.class_label << " (" << child.total;
            if (child.total - majority > 0) out << "/" << child.total - majority;
            out << ")\n";
        } else {
            out << "\n";
            render_tree(child, prefix + "|   ", out);
        }
    }
}

}  // namespace

std::string tree_to_text(const TreeNode& node) {
    std::ostringstream out;
    if (node.leaf) {
        out << node.class_label << " (" << node.total << ")\n";
        return out.str();
    }
    render_tree(node, "", out);
    return out.str();
}

ojson gain_ratio_table_to_json(const std::vector<GainRatioEntry>& entries) {
    ojson arr = ojson::array();
    for (const auto& e : entries) {
        ojson item;
        item["attribute"] = e.attribute;
        item["kind"] = to_string(e.kind);
        item["gain_ratio"] = e.gain_ratio;
        item["gain"] = e.gain;
        item["split_info"] = e.split_info;
        if (e.threshold) item["threshold"] = *e.threshold;
        arr.push_back(std::move(item));
    }
    return arr;
}

std::string gain_ratio_table_to_text(const std::vector<GainRatioEntry>& entries) {
    std::ostringstream out;
    out << std::left << std::setw(14) << "attribute" << std::setw(14) << "gain_ratio"
        << std::setw(14) << "gain" << std::setw(14) << "split_info" << "threshold\n";
    for (const auto& e : entries) {
        out << std::left << std::setw(14) << e.attribute << std::setw(14) << std::setprecision(8)
            << e.gain_ratio << std::setw(14) << e.gain << std::setw(14) << e.split_info;
        if (e.threshold) out << *e.threshold;
        out << "\n";
    }
    return out.str();
}

std::string matrix_to_text(const DiscernibilityMatrix& matrix,
                           const InformationSystem& table, std::size_t max_objects,
                           std::size_t cell_width) {
    const std::size_t n = std::min(matrix.rows(), max_objects);
    std::ostringstream out;
    out << std::left << std::setw(6) << "";
    for (std::size_t j = 0; j + 1 < n; ++j)
        out << std::setw(static_cast<int>(cell_width) + 2) << ("X" + std::to_string(j + 1));
    out << "\n";
    for (std::size_t i = 1; i < n; ++i) {
        out << std::left << std::setw(6) << ("X" + std::to_string(i + 1));
        for (std::size_t j = 0; j < i; ++j) {
            std::string cell;
            matrix.at(i, j).for_each([&](int a) {
                if (!cell.empty()) cell += "-";
                cell += table.attribute(a).name;
            });
            if (cell.size() > cell_width) cell = cell.substr(0, cell_width - 3) + "...";
            out << std::setw(static_cast<int>(cell_width) + 2) << cell;
        }
        out << "\n";
    }
    if (matrix.rows() > max_objects)
        out << "... (" << matrix.rows() - max_objects << " more objects)\n";
    return out.str();
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + path);
    out << content;
}

}  // namespace reductminer
