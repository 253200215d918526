#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trisearch/core/similarity.hpp"
#include "trisearch/core/types.hpp"
#include "trisearch/indexer/index.hpp"
#include "trisearch/providers/provider.hpp"

namespace trisearch::search {

enum class FusionStrategy { linear, combsum, combmnz, rrf, borda };

std::string_view strategy_name(FusionStrategy s);
FusionStrategy strategy_from_name(std::string_view name);

struct StrategyParams {
    std::size_t combsum_recall = 10;
    double rrf_k = 60.0;
};

struct SearchRequest {
    Query query;
    std::size_t top_k = 10; // clamped to the codebase size
    std::optional<FusionWeights> weights;
    FusionStrategy strategy = FusionStrategy::linear;
    // Optional per-query min-max normalization of each schema's scores before
    // fusion. Raw cosines are already commensurable, so this is off unless a
    // deployment has a reason to turn it on.
    bool normalize_scores = false;
};

struct StageTimings {
    double generation_ms = 0.0;
    double embedding_ms = 0.0;
    double scoring_ms = 0.0;
};

struct SearchResponse {
    RankedResult result; // truncated to top_k
    GeneratedCode gen_code_echo;
    StageTimings timing;
    bool degraded = false; // query-side generation fell back to the query text
};

// Candidate scores for one query against the whole index, before fusion.
struct ScoredCandidates {
    std::vector<std::pair<std::string, SchemaScores>> scores;
    GeneratedCode gen_code;
    StageTimings timing;
    bool degraded = false;
};

// Generates code for the query, embeds the query (twice when the query-code
// and query-comment schemas live in different spaces) and the generated code,
// and scores every index entry under the three schemas.
ScoredCandidates score_candidates(const Query& query, const indexer::CodebaseIndex& index,
                                  const providers::ProviderSet& providers,
                                  std::size_t scoring_threads = 0);

// Fuses a score matrix into a full ranking under the given strategy. The
// linear strategy applies the weights; the rank-aggregation baselines ignore
// them. Used by search and by the evaluation harness, which derives many
// rankings from one scoring pass.
RankedResult fuse_and_rank(const std::vector<std::pair<std::string, SchemaScores>>& scores,
                           const std::string& query_id, FusionStrategy strategy,
                           const FusionWeights& weights, const StrategyParams& params = {},
                           bool normalize_scores = false);

// Full pipeline: score, fuse per the requested strategy, rank, truncate to
// top_k. Deterministic given deterministic providers and a fixed index.
SearchResponse search(const SearchRequest& req, const indexer::CodebaseIndex& index,
                      const providers::ProviderSet& providers, const StrategyParams& params = {});

// search with the unit weight vector of one schema; the ordering equals
// sorting by that schema's score alone.
SearchResponse search_single_schema(const SearchRequest& req,
                                    const indexer::CodebaseIndex& index,
                                    const providers::ProviderSet& providers, Schema schema);

} // namespace trisearch::search
