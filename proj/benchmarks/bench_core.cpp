// Scale benchmarks on synthetic tables shaped like the bank marketing
// corpus: 16 conditional attributes, a few wide numeric columns and a
// majority of small categorical ones. The 45211-row scan covers the
// ~1.02e9-pair workload the engine is sized for.

#include <benchmark/benchmark.h>

#include <random>

#include "reductminer/dtree.hpp"
#include "reductminer/roughset.hpp"
#include "reductminer/rules.hpp"

using namespace reductminer;

namespace {

InformationSystem synthetic_bank(std::size_t rows) {
    std::mt19937 rng(12345);
    std::vector<AttributeDescriptor> attrs;
    std::vector<std::vector<std::int64_t>> columns;

    auto add_numeric = [&](const char* name, std::int64_t lo, std::int64_t hi) {
        AttributeDescriptor d;
        d.name = name;
        d.kind = AttributeKind::Discrete;
        attrs.push_back(std::move(d));
        std::uniform_int_distribution<std::int64_t> value(lo, hi);
        std::vector<std::int64_t> col(rows);
        for (auto& v : col) v = value(rng);
        columns.push_back(std::move(col));
    };
    auto add_categorical = [&](const char* name, int cardinality) {
        AttributeDescriptor d;
        d.name = name;
        d.kind = cardinality == 2 ? AttributeKind::Binary : AttributeKind::Categorical;
        for (int v = 0; v < cardinality; ++v)
            d.dictionary.push_back(std::string(name) + "_" + std::to_string(v));
        attrs.push_back(std::move(d));
        std::uniform_int_distribution<std::int64_t> value(0, cardinality - 1);
        std::vector<std::int64_t> col(rows);
        for (auto& v : col) v = value(rng);
        columns.push_back(std::move(col));
    };

    add_numeric("age", 18, 95);
    add_categorical("job", 12);
    add_categorical("marital", 3);
    add_categorical("education", 4);
    add_categorical("default", 2);
    add_numeric("balance", -8000, 102000);
    add_categorical("housing", 2);
    add_categorical("loan", 2);
    add_categorical("contact", 3);
    add_numeric("day", 1, 31);
    add_categorical("month", 12);
    add_numeric("duration", 0, 5000);
    add_numeric("campaign", 1, 60);
    add_numeric("pdays", -1, 900);
    add_numeric("previous", 0, 40);
    add_categorical("poutcome", 4);

    AttributeDescriptor decision;
    decision.name = "y";
    decision.kind = AttributeKind::Binary;
    decision.dictionary = {"no", "yes"};
    std::bernoulli_distribution yes(0.115);
    std::vector<std::int64_t> labels(rows);
    for (auto& v : labels) v = yes(rng) ? 1 : 0;

    return InformationSystem(std::move(attrs), std::move(columns), std::move(decision),
                             std::move(labels));
}

void BM_DiscernibilityScanSequential(benchmark::State& state) {
    InformationSystem table = synthetic_bank(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto summary = discernibility_scan(table, table.all_attributes(),
                                           ScanMode::Absolute, 1);
        benchmark::DoNotOptimize(summary.pair_count);
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(table.row_count()) *
                            (static_cast<std::int64_t>(table.row_count()) - 1) / 2);
}

void BM_DiscernibilityScanParallel(benchmark::State& state) {
    InformationSystem table = synthetic_bank(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto summary = discernibility_scan(table, table.all_attributes());
        benchmark::DoNotOptimize(summary.pair_count);
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(table.row_count()) *
                            (static_cast<std::int64_t>(table.row_count()) - 1) / 2);
}

void BM_PartitionFull(benchmark::State& state) {
    InformationSystem table = synthetic_bank(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        Partition p = partition_by(table, table.all_attributes());
        benchmark::DoNotOptimize(p.block_count());
    }
}

void BM_BuildTree(benchmark::State& state) {
    InformationSystem table = synthetic_bank(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto tree = build_tree(table);
        benchmark::DoNotOptimize(tree->leaf_count());
    }
}

void BM_EvaluateRule(benchmark::State& state) {
    InformationSystem table = synthetic_bank(static_cast<std::size_t>(state.range(0)));
    Rule rule;
    rule.conditions.push_back(Condition::interval("duration", std::nullopt, 211.5));
    rule.conditions.push_back(Condition::interval("age", std::nullopt, 60, false, true));
    rule.consequent = "no";
    for (auto _ : state) {
        RuleMetrics m = evaluate_rule(rule, table);
        benchmark::DoNotOptimize(m.support);
    }
}

void BM_GreedyReduct(benchmark::State& state) {
    InformationSystem table = synthetic_bank(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        AttributeSet reduct = greedy_reduct(table);
        benchmark::DoNotOptimize(reduct.bits());
    }
}

}  // namespace

BENCHMARK(BM_DiscernibilityScanSequential)
    ->Unit(benchmark::kMillisecond)
    ->Iterations(1)
    ->Arg(4521)
    ->Arg(45211);
BENCHMARK(BM_DiscernibilityScanParallel)
    ->Unit(benchmark::kMillisecond)
    ->Iterations(1)
    ->Arg(4521)
    ->Arg(45211);
BENCHMARK(BM_PartitionFull)->Unit(benchmark::kMillisecond)->Arg(45211);
BENCHMARK(BM_BuildTree)->Unit(benchmark::kMillisecond)->Arg(4521);
BENCHMARK(BM_EvaluateRule)->Unit(benchmark::kMillisecond)->Arg(45211);
BENCHMARK(BM_GreedyReduct)->Unit(benchmark::kMillisecond)->Arg(4521);

BENCHMARK_MAIN();
