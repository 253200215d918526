#include "trisearch/search/engine.hpp"

#include <algorithm>
#include <chrono>
#include <thread>
#include <unordered_map>

#include "trisearch/core/errors.hpp"
#include "trisearch/core/parallel.hpp"
#include "trisearch/fusion/run_list.hpp"
#include "trisearch/providers/text.hpp"

namespace trisearch::search {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

EmbeddingVector embed_one(const std::string& text, const providers::EmbeddingProviderConfig& cfg,
                          providers::EmbeddingProvider& provider) {
    const std::vector<std::string> texts{text};
    return providers::embed_batch(texts, cfg, provider).front();
}

// Per-query min-max rescaling of one schema column to [0, 1]; constant
// columns collapse to 0.
void min_max_normalize(std::vector<std::pair<std::string, SchemaScores>>& scores) {
    if (scores.empty())
        return;
    for (Schema s : kAllSchemas) {
        double lo = scores.front().second.get(s);
        double hi = lo;
        for (const auto& [id, sc] : scores) {
            lo = std::min(lo, sc.get(s));
            hi = std::max(hi, sc.get(s));
        }
        const double range = hi - lo;
        for (auto& [id, sc] : scores) {
            double* field = nullptr;
            switch (s) {
            case Schema::query_code:
                field = &sc.qc;
                break;
            case Schema::query_comment:
                field = &sc.qm;
                break;
            case Schema::code_code:
                field = &sc.cg;
                break;
            }
            *field = range > 0.0 ? (*field - lo) / range : 0.0;
        }
    }
}

} // namespace

std::string_view strategy_name(FusionStrategy s) {
    switch (s) {
    case FusionStrategy::linear:
        return "linear";
    case FusionStrategy::combsum:
        return "combsum";
    case FusionStrategy::combmnz:
        return "combmnz";
    case FusionStrategy::rrf:
        return "rrf";
    case FusionStrategy::borda:
        return "borda";
    }
    return "linear";
}

RankedResult fuse_and_rank(const std::vector<std::pair<std::string, SchemaScores>>& scores,
                           const std::string& query_id, FusionStrategy strategy,
                           const FusionWeights& weights, const StrategyParams& params,
                           bool normalize_scores) {
    if (normalize_scores) {
        auto normalized = scores;
        min_max_normalize(normalized);
        return fuse_and_rank(normalized, query_id, strategy, weights, params, false);
    }
    if (strategy == FusionStrategy::linear)
        return rank_candidates(scores, weights, query_id);

    // Rank-aggregation baselines consume one run per schema.
    std::vector<fusion::RunList> runs;
    runs.reserve(3);
    for (Schema s : kAllSchemas) {
        std::vector<std::pair<std::string, double>> column;
        column.reserve(scores.size());
        for (const auto& [id, sc] : scores)
            column.emplace_back(id, sc.get(s));
        runs.push_back(fusion::make_run_list(std::move(column)));
    }

    std::vector<fusion::FusedEntry> fused;
    switch (strategy) {
    case FusionStrategy::combsum:
        fused = fusion::combsum(runs, params.combsum_recall);
        break;
    case FusionStrategy::combmnz:
        fused = fusion::combmnz(runs, params.combsum_recall);
        break;
    case FusionStrategy::rrf:
        fused = fusion::rrf(runs, params.rrf_k);
        break;
    case FusionStrategy::borda:
        fused = fusion::borda(runs);
        break;
    case FusionStrategy::linear:
        break;
    }

    std::unordered_map<std::string_view, const SchemaScores*> by_id;
    by_id.reserve(scores.size());
    for (const auto& [id, sc] : scores)
        by_id.emplace(id, &sc);

    RankedResult result;
    result.query_id = query_id;
    result.entries.reserve(fused.size());
    for (std::size_t i = 0; i < fused.size(); ++i) {
        RankedResult::Entry e;
        e.candidate_id = fused[i].candidate_id;
        e.fused_score = fused[i].score;
        e.scores = *by_id.at(e.candidate_id);
        e.rank = static_cast<int>(i) + 1;
        result.entries.push_back(std::move(e));
    }
    return result;
}

FusionStrategy strategy_from_name(std::string_view name) {
    if (name == "linear")
        return FusionStrategy::linear;
    if (name == "combsum")
        return FusionStrategy::combsum;
    if (name == "combmnz")
        return FusionStrategy::combmnz;
    if (name == "rrf")
        return FusionStrategy::rrf;
    if (name == "borda")
        return FusionStrategy::borda;
    throw ParameterError("unknown fusion strategy: " + std::string(name));
}

ScoredCandidates score_candidates(const Query& query, const indexer::CodebaseIndex& index,
                                  const providers::ProviderSet& providers,
                                  std::size_t scoring_threads) {
    if (providers::trim(query.text).empty())
        throw ParameterError("query text must be non-empty");
    if (index.entries.empty())
        throw EmptyCodebaseError("index holds no entries");

    indexer::FingerprintMap configured;
    for (Schema s : kAllSchemas)
        configured[s] = providers.for_schema(s).fingerprint();
    indexer::ensure_compatible(index, configured);

    ScoredCandidates out;

    // Exactly one code generation per search; the comment side is offline.
    auto t_gen = Clock::now();
    out.gen_code = providers::generate_code(query, providers.generation_cfg,
                                            *providers.generation, providers.generate_prompt);
    out.degraded = out.gen_code.fallback;
    out.timing.generation_ms = ms_since(t_gen);

    auto t_embed = Clock::now();
    const auto qc_query_cfg =
        providers.side_config(Schema::query_code, providers::InputKind::natural_language);
    const auto qm_query_cfg =
        providers.side_config(Schema::query_comment, providers::InputKind::natural_language);
    const auto cc_code_cfg = providers.side_config(Schema::code_code, providers::InputKind::code);

    const EmbeddingVector query_vec_qc =
        embed_one(query.text, qc_query_cfg, *providers.query_code);
    // The query is embedded a second time only when the query-comment schema
    // lives in a different space.
    const bool shared_query_space = providers.query_code->fingerprint().key() ==
                                    providers.query_comment->fingerprint().key();
    const EmbeddingVector query_vec_qm =
        shared_query_space ? query_vec_qc
                           : embed_one(query.text, qm_query_cfg, *providers.query_comment);
    const EmbeddingVector gen_code_vec =
        embed_one(out.gen_code.source, cc_code_cfg, *providers.code_code);
    out.timing.embedding_ms = ms_since(t_embed);

    auto t_score = Clock::now();
    out.scores.resize(index.entries.size());
    const std::size_t workers =
        scoring_threads > 0 ? scoring_threads : std::thread::hardware_concurrency();
    parallel_for(index.entries.size(), workers, [&](std::size_t i) {
        const indexer::IndexEntry& entry = index.entries[i];
        out.scores[i] = {entry.snippet.id,
                         schema_scores(query_vec_qc, entry.code_vec_qc, query_vec_qm,
                                       entry.comment_vec, entry.code_vec_cc, gen_code_vec)};
    });
    out.timing.scoring_ms = ms_since(t_score);
    return out;
}

SearchResponse search(const SearchRequest& req, const indexer::CodebaseIndex& index,
                      const providers::ProviderSet& providers, const StrategyParams& params) {
    if (req.top_k == 0)
        throw ParameterError("top_k must be positive");

    ScoredCandidates scored = score_candidates(req.query, index, providers);

    auto t_score = Clock::now();
    const FusionWeights weights = req.weights.value_or(FusionWeights::defaults());
    RankedResult ranked = fuse_and_rank(scored.scores, req.query.id, req.strategy, weights,
                                        params, req.normalize_scores);

    const std::size_t keep = std::min(req.top_k, ranked.entries.size());
    ranked.entries.resize(keep);

    SearchResponse response;
    response.result = std::move(ranked);
    response.gen_code_echo = std::move(scored.gen_code);
    response.timing = scored.timing;
    response.timing.scoring_ms += ms_since(t_score);
    response.degraded = scored.degraded;
    return response;
}

SearchResponse search_single_schema(const SearchRequest& req,
                                    const indexer::CodebaseIndex& index,
                                    const providers::ProviderSet& providers, Schema schema) {
    SearchRequest single = req;
    single.weights = FusionWeights::unit(schema);
    single.strategy = FusionStrategy::linear;
    return search(single, index, providers);
}

} // namespace trisearch::search
