#pragma once

#include <map>
#include <string>
#include <vector>

#include "trisearch/eval/complementarity.hpp"
#include "trisearch/eval/metrics.hpp"
#include "trisearch/indexer/index.hpp"
#include "trisearch/providers/provider.hpp"
#include "trisearch/search/engine.hpp"

namespace trisearch::eval {

struct PipelineOptions {
    FusionWeights weights = FusionWeights::defaults();
    std::vector<search::FusionStrategy> strategies = {search::FusionStrategy::linear};
    search::StrategyParams params;
    std::size_t concurrency = 8; // queries scored in flight
};

struct PipelineResult {
    // Keyed by strategy name; the fused run plus one report per single schema.
    std::map<std::string, EvalReport> per_strategy;
    std::map<Schema, EvalReport> per_schema;
    ComplementarityReport complementarity;
    // strategy -> (query id, truth rank, 0 when absent) for CSV export.
    std::map<std::string, std::vector<std::pair<std::string, std::size_t>>> truth_ranks;
    double total_wall_ms = 0.0;
    std::size_t degraded_queries = 0;
};

// Scores every query once against the index, then derives the three
// single-schema rankings and one fused ranking per requested strategy from
// that score matrix. Deterministic given deterministic providers.
PipelineResult evaluate_pipeline(const std::vector<Query>& queries, const EvalDataset& truth,
                                 const indexer::CodebaseIndex& index,
                                 const providers::ProviderSet& providers,
                                 const PipelineOptions& options = {});

} // namespace trisearch::eval
