#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "trisearch/core/types.hpp"
#include "trisearch/indexer/index.hpp"
#include "trisearch/providers/config.hpp"
#include "trisearch/providers/provider.hpp"
#include "trisearch/search/engine.hpp"

namespace trisearch::service {

// Whole-engine configuration: one embedding space per schema, the generator,
// fusion defaults, paths and the server knobs. Loaded from a JSON file;
// "${VAR}" in any string value is replaced from the environment and missing
// variables fail fast, as do unresolvable auth_env references.
struct EngineConfig {
    providers::EmbeddingProviderConfig query_code;
    providers::EmbeddingProviderConfig query_comment;
    providers::EmbeddingProviderConfig code_code;
    providers::GenerationProviderConfig generation;

    FusionWeights weights = FusionWeights::defaults();
    search::FusionStrategy strategy = search::FusionStrategy::linear;
    search::StrategyParams strategy_params;
    bool normalize_scores = false;

    std::string index_path = "index.tsix";
    std::string cache_path = ".trisearch-cache";
    std::string bind_address = "127.0.0.1";
    int port = 8080;
    std::size_t concurrency = 8;
    providers::TransportOptions transport;

    static EngineConfig from_file(const std::filesystem::path& path);
    static EngineConfig from_json(const nlohmann::json& doc);

    // Builds all four providers, resolving auth env vars; throws ConfigError
    // before anything binds or connects if a secret is missing.
    providers::ProviderSet make_providers() const;

    // endpoint/model per schema for index compatibility checks (dim 0).
    indexer::FingerprintMap expected_fingerprints() const;
};

} // namespace trisearch::service
