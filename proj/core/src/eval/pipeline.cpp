#include "trisearch/eval/pipeline.hpp"

#include <atomic>
#include <chrono>

#include "trisearch/core/errors.hpp"
#include "trisearch/core/parallel.hpp"

namespace trisearch::eval {

namespace {

using Clock = std::chrono::steady_clock;

} // namespace

PipelineResult evaluate_pipeline(const std::vector<Query>& queries, const EvalDataset& truth,
                                 const indexer::CodebaseIndex& index,
                                 const providers::ProviderSet& providers,
                                 const PipelineOptions& options) {
    if (queries.empty())
        throw EvalInputError("evaluation needs at least one query");
    for (const Query& q : queries)
        truth.relevant_for(q.id); // validates coverage up front

    const auto started = Clock::now();

    // One scoring pass per query; every ranking below derives from it.
    std::vector<search::ScoredCandidates> scored(queries.size());
    std::atomic<std::size_t> degraded{0};
    parallel_for(queries.size(), options.concurrency, [&](std::size_t i) {
        scored[i] = search::score_candidates(queries[i], index, providers, 1);
        if (scored[i].degraded)
            degraded.fetch_add(1);
    });

    PipelineResult result;
    result.degraded_queries = degraded.load();

    std::vector<search::FusionStrategy> strategies = options.strategies;
    if (strategies.empty())
        strategies.push_back(search::FusionStrategy::linear);

    for (search::FusionStrategy strategy : strategies) {
        std::vector<RankedResult> rankings(queries.size());
        parallel_for(queries.size(), options.concurrency, [&](std::size_t i) {
            rankings[i] = search::fuse_and_rank(scored[i].scores, queries[i].id, strategy,
                                                options.weights, options.params);
        });

        const std::string name(search::strategy_name(strategy));
        auto report = evaluate_rankings(rankings, truth);
        auto& ranks = result.truth_ranks[name];
        ranks.reserve(rankings.size());
        for (const RankedResult& r : rankings)
            ranks.emplace_back(r.query_id, truth_rank(r, truth.relevant_for(r.query_id)));
        result.per_strategy[name] = std::move(report);
    }

    // Single-schema rankings reuse the same scores with unit weights.
    std::map<Schema, std::vector<RankedResult>> per_schema_rankings;
    for (Schema s : kAllSchemas) {
        auto& rankings = per_schema_rankings[s];
        rankings.resize(queries.size());
        parallel_for(queries.size(), options.concurrency, [&](std::size_t i) {
            rankings[i] = search::fuse_and_rank(scored[i].scores, queries[i].id,
                                                search::FusionStrategy::linear,
                                                FusionWeights::unit(s));
        });
        result.per_schema[s] = evaluate_rankings(rankings, truth);
    }
    result.complementarity = complementarity(per_schema_rankings, truth);

    result.total_wall_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - started).count();
    for (auto& [name, report] : result.per_strategy)
        report.wall_clock_ms = result.total_wall_ms;
    return result;
}

} // namespace trisearch::eval
