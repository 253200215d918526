#include "trisearch/providers/provider.hpp"

#include <cmath>

#include "trisearch/core/errors.hpp"
#include "trisearch/providers/text.hpp"

namespace trisearch::providers {

namespace {

EmbeddingVector normalize(const EmbeddingVector& v) {
    const double norm = v.l2_norm();
    if (norm == 0.0)
        throw ProviderContractError("provider returned a zero embedding vector");
    std::vector<float> scaled(v.values().begin(), v.values().end());
    for (float& x : scaled)
        x = static_cast<float>(x / norm);
    return EmbeddingVector(std::move(scaled), true);
}

// Attempts generation up to cfg.retries + 1 times; returns the post-processed
// text, or empty if every attempt failed or came back blank.
std::string attempt_generation(const std::string& prompt, std::size_t max_new_units,
                               const GenerationProviderConfig& cfg,
                               GenerationProvider& provider) {
    for (std::size_t attempt = 0; attempt <= cfg.retries; ++attempt) {
        std::string raw;
        try {
            raw = provider.generate(prompt, max_new_units, cfg.temperature);
        } catch (const Error&) {
            continue;
        }
        std::string cleaned = strip_code_fences(raw);
        if (!cleaned.empty())
            return cleaned;
    }
    return "";
}

} // namespace

std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts,
                                         const EmbeddingProviderConfig& cfg,
                                         EmbeddingProvider& provider) {
    if (texts.empty())
        throw ParameterError("embed_batch: texts must be non-empty");
    if (cfg.batch_size == 0)
        throw ParameterError("embed_batch: batch_size must be positive");

    std::vector<std::string> prepared;
    prepared.reserve(texts.size());
    for (const auto& t : texts)
        prepared.push_back(truncate_text(t, cfg.max_input_length, cfg.length_unit).text);

    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    std::size_t expected_dim = 0;

    for (std::size_t begin = 0; begin < prepared.size(); begin += cfg.batch_size) {
        const std::size_t count = std::min(cfg.batch_size, prepared.size() - begin);
        std::span<const std::string> chunk(prepared.data() + begin, count);
        std::vector<EmbeddingVector> vectors = provider.embed(chunk);

        if (vectors.size() != chunk.size())
            throw ProviderContractError("embedding count mismatch: sent " +
                                        std::to_string(chunk.size()) + ", got " +
                                        std::to_string(vectors.size()));
        for (auto& v : vectors) {
            if (expected_dim == 0)
                expected_dim = v.dim();
            else if (v.dim() != expected_dim)
                throw ProviderContractError(
                    "inconsistent embedding dimensions within a batch: " +
                    std::to_string(v.dim()) + " vs " + std::to_string(expected_dim));
            out.push_back(v.normalized() ? std::move(v) : normalize(v));
        }
    }
    return out;
}

GeneratedComment generate_comment(const CodeSnippet& code, const GenerationProviderConfig& cfg,
                                  GenerationProvider& provider, const PromptTemplate& tmpl) {
    const std::string prompt = render_prompt(tmpl, code.language, code.source);
    std::string text = attempt_generation(prompt, cfg.max_new_comment, cfg, provider);

    GeneratedComment comment;
    comment.generator = provider.model_name();
    if (text.empty()) {
        comment.fallback = true;
        text = code.source;
    }
    auto truncated = truncate_text(text, cfg.max_new_comment, cfg.length_unit);
    comment.text = std::move(truncated.text);
    comment.truncated = truncated.truncated;
    return comment;
}

GeneratedCode generate_code(const Query& query, const GenerationProviderConfig& cfg,
                            GenerationProvider& provider, const PromptTemplate& tmpl) {
    const std::string prompt = render_prompt(tmpl, query.language, query.text);
    std::string text = attempt_generation(prompt, cfg.max_new_code, cfg, provider);

    GeneratedCode gen;
    gen.generator = provider.model_name();
    if (text.empty()) {
        gen.fallback = true;
        text = query.text;
    }
    auto truncated = truncate_text(text, cfg.max_new_code, cfg.length_unit);
    gen.source = std::move(truncated.text);
    gen.truncated = truncated.truncated;
    return gen;
}

EmbeddingProvider& ProviderSet::for_schema(Schema s) const {
    switch (s) {
    case Schema::query_code:
        return *query_code;
    case Schema::query_comment:
        return *query_comment;
    case Schema::code_code:
        return *code_code;
    }
    return *query_code;
}

const EmbeddingProviderConfig& ProviderSet::config_for_schema(Schema s) const {
    switch (s) {
    case Schema::query_code:
        return query_code_cfg;
    case Schema::query_comment:
        return query_comment_cfg;
    case Schema::code_code:
        return code_code_cfg;
    }
    return query_code_cfg;
}

EmbeddingProviderConfig ProviderSet::side_config(Schema s, InputKind kind) const {
    EmbeddingProviderConfig cfg = config_for_schema(s);
    if (cfg.input_kind != kind) {
        cfg.input_kind = kind;
        cfg.max_input_length = default_input_limit(kind);
    }
    return cfg;
}

} // namespace trisearch::providers
