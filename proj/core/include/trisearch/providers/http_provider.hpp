#pragma once

#include <memory>

#include "trisearch/providers/provider.hpp"

namespace trisearch::providers {

// Embeddings over HTTP JSON: POST {endpoint}/embeddings with
// {"model": ..., "input": [...]} expecting {"data": [{"embedding": [...]}]}.
// Bearer auth comes from the env var named in cfg.auth_secret_ref and is
// resolved at construction; a missing variable fails fast.
class HttpEmbeddingProvider : public EmbeddingProvider {
public:
    explicit HttpEmbeddingProvider(EmbeddingProviderConfig cfg, TransportOptions transport = {});
    ~HttpEmbeddingProvider() override;

    std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;
    ProviderFingerprint fingerprint() const override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Chat completions over HTTP JSON: POST {endpoint}/chat/completions with
// {"model", "messages": [{"role": "user", "content": prompt}], "max_tokens",
// "temperature"} expecting {"choices": [{"message": {"content": ...}}]}.
class HttpGenerationProvider : public GenerationProvider {
public:
    explicit HttpGenerationProvider(GenerationProviderConfig cfg, TransportOptions transport = {});
    ~HttpGenerationProvider() override;

    std::string generate(const std::string& prompt, std::size_t max_new_units,
                         double temperature) override;
    std::string model_name() const override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace trisearch::providers
