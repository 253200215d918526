#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "trisearch/core/types.hpp"
#include "trisearch/providers/config.hpp"
#include "trisearch/providers/prompts.hpp"

namespace trisearch::providers {

// Identity of an embedding space. Two vectors are only ever compared when
// their fingerprints match.
struct ProviderFingerprint {
    std::string endpoint;
    std::string model;
    std::size_t dim = 0; // 0 until the first batch reveals it

    std::string key() const { return endpoint + "|" + model; }

    friend bool operator==(const ProviderFingerprint&, const ProviderFingerprint&) = default;
};

// Embedding transport. Implementations are immutable after construction and
// safe to call concurrently.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    // One vector per input, all with the same dimension, L2-normalized.
    // Inputs are already truncated by the caller.
    virtual std::vector<EmbeddingVector> embed(std::span<const std::string> texts) = 0;

    virtual ProviderFingerprint fingerprint() const = 0;
};

// Chat-completion transport; returns the raw assistant text for one prompt.
class GenerationProvider {
public:
    virtual ~GenerationProvider() = default;

    virtual std::string generate(const std::string& prompt, std::size_t max_new_units,
                                 double temperature) = 0;

    virtual std::string model_name() const = 0;
};

// Truncates each text per cfg, embeds in cfg.batch_size chunks and verifies
// the transport contract: one vector per input, consistent dimensions.
// Vectors are L2-normalized on receipt.
std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts,
                                         const EmbeddingProviderConfig& cfg,
                                         EmbeddingProvider& provider);

// Prompts the generator to summarize `code`. The response is trimmed, fence-
// stripped and truncated to cfg.max_new_comment units. Empty or failed
// generations fall back to the raw code text with the fallback flag set, so
// query-comment matching degrades toward query-code instead of matching
// against nothing.
GeneratedComment generate_comment(const CodeSnippet& code, const GenerationProviderConfig& cfg,
                                  GenerationProvider& provider, const PromptTemplate& tmpl);

// Prompts the generator to write code for `query`; mirrors generate_comment
// with the 256-unit limit and a fallback to the query text.
GeneratedCode generate_code(const Query& query, const GenerationProviderConfig& cfg,
                            GenerationProvider& provider, const PromptTemplate& tmpl);

// Everything the indexing and search pipelines need to talk to the outside
// world: one embedding space per schema plus the generator and its prompts.
struct ProviderSet {
    std::shared_ptr<EmbeddingProvider> query_code;
    std::shared_ptr<EmbeddingProvider> query_comment;
    std::shared_ptr<EmbeddingProvider> code_code;
    std::shared_ptr<GenerationProvider> generation;

    EmbeddingProviderConfig query_code_cfg;
    EmbeddingProviderConfig query_comment_cfg;
    EmbeddingProviderConfig code_code_cfg;
    GenerationProviderConfig generation_cfg;

    PromptTemplate summarize_prompt = PromptTemplate::summarize_default();
    PromptTemplate generate_prompt = PromptTemplate::generate_default();

    EmbeddingProvider& for_schema(Schema s) const;
    const EmbeddingProviderConfig& config_for_schema(Schema s) const;

    // Embedding config for one side of a schema; the limit follows the input
    // kind (256 units for code, 128 for natural language).
    EmbeddingProviderConfig side_config(Schema s, InputKind kind) const;
};

} // namespace trisearch::providers
