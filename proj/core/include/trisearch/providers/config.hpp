#pragma once

#include <cstddef>
#include <string>

#include "trisearch/providers/text.hpp"

namespace trisearch::providers {

enum class InputKind { natural_language, code };

// Retriever input limits: 256 units for code, 128 for natural language.
constexpr std::size_t kDefaultCodeInputLimit = 256;
constexpr std::size_t kDefaultNlInputLimit = 128;

// Generation output limits: 256 units for code, 128 for comments.
constexpr std::size_t kDefaultCodeOutputLimit = 256;
constexpr std::size_t kDefaultCommentOutputLimit = 128;

inline std::size_t default_input_limit(InputKind kind) {
    return kind == InputKind::code ? kDefaultCodeInputLimit : kDefaultNlInputLimit;
}

struct EmbeddingProviderConfig {
    std::string endpoint_url;
    std::string model_name;
    InputKind input_kind = InputKind::natural_language;
    std::size_t max_input_length = kDefaultNlInputLimit;
    LengthUnit length_unit = LengthUnit::words;
    std::size_t batch_size = 32;
    std::string auth_secret_ref; // env var holding the bearer token; empty = no auth

    static EmbeddingProviderConfig for_kind(std::string endpoint, std::string model,
                                            InputKind kind) {
        EmbeddingProviderConfig cfg;
        cfg.endpoint_url = std::move(endpoint);
        cfg.model_name = std::move(model);
        cfg.input_kind = kind;
        cfg.max_input_length = default_input_limit(kind);
        return cfg;
    }
};

struct GenerationProviderConfig {
    std::string endpoint_url;
    std::string model_name;
    std::size_t max_new_code = kDefaultCodeOutputLimit;
    std::size_t max_new_comment = kDefaultCommentOutputLimit;
    LengthUnit length_unit = LengthUnit::words;
    double temperature = 0.0; // deterministic decoding keeps index builds reproducible
    std::size_t retries = 2;
    std::string auth_secret_ref;
};

// Retry/backoff policy for HTTP transports. Tests shrink the delays.
struct TransportOptions {
    std::size_t retries = 2;
    std::size_t backoff_initial_ms = 100;
    std::size_t backoff_max_ms = 2000;
    std::size_t timeout_ms = 30000;
};

} // namespace trisearch::providers
