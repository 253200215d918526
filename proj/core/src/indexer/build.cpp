#include "trisearch/indexer/build.hpp"

#include <atomic>
#include <chrono>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "trisearch/core/errors.hpp"
#include "trisearch/core/parallel.hpp"
#include "trisearch/providers/text.hpp"

namespace trisearch::indexer {

using nlohmann::json;

namespace {

std::int64_t now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

std::string comment_cache_key(const providers::GenerationProviderConfig& cfg,
                              const std::string& model) {
    return "summarize\x1f" + model + "\x1f" + std::to_string(cfg.max_new_comment) + "\x1f" +
           std::string(providers::length_unit_name(cfg.length_unit));
}

std::string encode_comment(const GeneratedComment& c) {
    return json{{"text", c.text},
                {"generator", c.generator},
                {"truncated", c.truncated},
                {"fallback", c.fallback}}
        .dump();
}

GeneratedComment decode_comment(const std::string& payload) {
    const json obj = json::parse(payload);
    GeneratedComment c;
    c.text = obj.at("text").get<std::string>();
    c.generator = obj.at("generator").get<std::string>();
    c.truncated = obj.at("truncated").get<bool>();
    c.fallback = obj.at("fallback").get<bool>();
    return c;
}

} // namespace

CodebaseIndex build_index(const std::vector<CodeSnippet>& codebase,
                          const providers::ProviderSet& providers, EmbeddingCache& cache,
                          const BuildOptions& options, BuildStats* stats) {
    if (codebase.empty())
        throw EmptyCodebaseError("cannot index an empty codebase");
    {
        std::unordered_set<std::string_view> ids;
        ids.reserve(codebase.size());
        for (const auto& s : codebase) {
            if (!ids.insert(s.id).second)
                throw DataError("duplicate snippet id: " + s.id);
        }
    }

    BuildStats local;
    const std::string gen_key =
        comment_cache_key(providers.generation_cfg, providers.generation->model_name());

    // Comment generation, bounded by the provider concurrency limit. Results
    // are cached as they complete, so an interrupted build resumes here.
    std::vector<GeneratedComment> comments(codebase.size());
    std::atomic<std::size_t> gen_hits{0};
    std::atomic<std::size_t> gen_requests{0};
    std::atomic<std::size_t> fallbacks{0};
    parallel_for(codebase.size(), options.concurrency, [&](std::size_t i) {
        const CodeSnippet& snippet = codebase[i];
        if (auto cached = cache.find_text(gen_key, snippet.source)) {
            comments[i] = decode_comment(*cached);
            gen_hits.fetch_add(1);
        } else {
            gen_requests.fetch_add(1);
            comments[i] = providers::generate_comment(snippet, providers.generation_cfg,
                                                      *providers.generation,
                                                      providers.summarize_prompt);
            // Fallbacks are not cached; a later run with a healthy provider
            // should retry them.
            if (!comments[i].fallback)
                cache.store_text(gen_key, snippet.source, encode_comment(comments[i]));
        }
        if (comments[i].fallback)
            fallbacks.fetch_add(1);
    });
    local.generation_cache_hits = gen_hits.load();
    local.generation_requests = gen_requests.load();
    local.fallback_comments = fallbacks.load();

    std::vector<std::string> code_texts;
    code_texts.reserve(codebase.size());
    for (const auto& s : codebase)
        code_texts.push_back(s.source);
    std::vector<std::string> comment_texts;
    comment_texts.reserve(comments.size());
    for (const auto& c : comments)
        comment_texts.push_back(c.text);

    auto embed_all = [&](const std::vector<std::string>& texts,
                         const providers::EmbeddingProviderConfig& cfg,
                         providers::EmbeddingProvider& provider) {
        const auto fp = provider.fingerprint();
        std::vector<EmbeddingVector> out(texts.size());
        std::vector<std::size_t> miss_indices;
        std::vector<std::string> miss_texts;

        // The cache key is the text as transmitted, i.e. after truncation.
        std::vector<std::string> prepared(texts.size());
        for (std::size_t i = 0; i < texts.size(); ++i) {
            prepared[i] =
                providers::truncate_text(texts[i], cfg.max_input_length, cfg.length_unit).text;
            if (auto hit = cache.find_vector(fp, prepared[i])) {
                out[i] = std::move(*hit);
                ++local.embedding_cache_hits;
            } else {
                miss_indices.push_back(i);
                miss_texts.push_back(prepared[i]);
            }
        }

        // Chunked by batch size, each chunk cached as it lands, so an outage
        // mid-pass loses at most one batch of work.
        for (std::size_t begin = 0; begin < miss_texts.size(); begin += cfg.batch_size) {
            const std::size_t count = std::min(cfg.batch_size, miss_texts.size() - begin);
            std::span<const std::string> chunk(miss_texts.data() + begin, count);
            local.embedding_requests += count;
            std::vector<EmbeddingVector> fresh;
            try {
                fresh = providers::embed_batch(chunk, cfg, provider);
            } catch (const ProviderUnavailable& e) {
                throw BuildInterrupted(
                    std::string("index build interrupted: ") + e.what(),
                    texts.size() - miss_texts.size() + begin,
                    "completed work is cached under " + cache.root().string() +
                        "; rerun the build to resume");
            }
            for (std::size_t k = 0; k < count; ++k) {
                cache.store_vector(fp, miss_texts[begin + k], fresh[k]);
                out[miss_indices[begin + k]] = std::move(fresh[k]);
            }
        }
        return out;
    };

    const auto qc_cfg = providers.side_config(Schema::query_code, providers::InputKind::code);
    const auto cc_cfg = providers.side_config(Schema::code_code, providers::InputKind::code);
    const auto qm_cfg =
        providers.side_config(Schema::query_comment, providers::InputKind::natural_language);

    std::vector<EmbeddingVector> code_qc =
        embed_all(code_texts, qc_cfg, *providers.query_code);

    // When query-code and code-code share one space the second vector
    // aliases the first; skip the second embedding pass outright.
    const bool shared_code_space = providers.query_code->fingerprint().key() ==
                                   providers.code_code->fingerprint().key();
    std::vector<EmbeddingVector> code_cc;
    if (!shared_code_space)
        code_cc = embed_all(code_texts, cc_cfg, *providers.code_code);

    std::vector<EmbeddingVector> comment_vecs =
        embed_all(comment_texts, qm_cfg, *providers.query_comment);

    CodebaseIndex index;
    index.codebase_id = options.codebase_id;
    index.created_at_ms = now_ms();
    index.fingerprints[Schema::query_code] = providers.query_code->fingerprint();
    index.fingerprints[Schema::query_comment] = providers.query_comment->fingerprint();
    index.fingerprints[Schema::code_code] = providers.code_code->fingerprint();
    // Fingerprints queried before any batch ran may still carry dim 0.
    index.fingerprints[Schema::query_code].dim = code_qc.front().dim();
    index.fingerprints[Schema::code_code].dim =
        shared_code_space ? code_qc.front().dim() : code_cc.front().dim();
    index.fingerprints[Schema::query_comment].dim = comment_vecs.front().dim();

    index.entries.reserve(codebase.size());
    for (std::size_t i = 0; i < codebase.size(); ++i) {
        IndexEntry e;
        e.snippet = codebase[i];
        e.comment = comments[i];
        e.code_vec_qc = std::move(code_qc[i]);
        e.code_vec_cc = shared_code_space ? e.code_vec_qc : std::move(code_cc[i]);
        e.comment_vec = std::move(comment_vecs[i]);
        index.entries.push_back(std::move(e));
    }

    local.entries = index.entries.size();
    if (stats)
        *stats = local;
    return index;
}

} // namespace trisearch::indexer
