#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "trisearch/providers/provider.hpp"

namespace trisearch::providers {

// Deterministic embedding provider for tests and offline runs: each text maps
// to a unit vector derived from a seeded hash of (model, text). The same
// input always produces bit-identical output, across processes.
class HashEmbeddingProvider : public EmbeddingProvider {
public:
    HashEmbeddingProvider(std::size_t dim, std::string model = "mock-hash",
                          std::uint64_t seed = 0, std::string endpoint = "mock://hash");

    std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;
    ProviderFingerprint fingerprint() const override;

    // Provider-call observability for cache tests.
    std::size_t call_count() const noexcept { return calls_.load(); }
    std::size_t texts_embedded() const noexcept { return texts_.load(); }
    void reset_counters() noexcept;

    // Computes the vector for one text without touching the counters.
    EmbeddingVector vector_for(const std::string& text) const;

private:
    std::size_t dim_;
    std::string model_;
    std::uint64_t seed_;
    std::string endpoint_;
    std::atomic<std::size_t> calls_{0};
    std::atomic<std::size_t> texts_{0};
};

// Returns the prompt's payload (the text after the instruction line), so a
// summarize prompt echoes the code and a generate prompt echoes the query.
class EchoGenerationProvider : public GenerationProvider {
public:
    explicit EchoGenerationProvider(std::string model = "mock-echo");

    std::string generate(const std::string& prompt, std::size_t max_new_units,
                         double temperature) override;
    std::string model_name() const override { return model_; }

    std::size_t call_count() const noexcept { return calls_.load(); }

private:
    std::string model_;
    std::atomic<std::size_t> calls_{0};
};

// Fully scriptable generator: canned responses per payload substring, an
// optional default, and failure injection for error-path tests.
class ScriptedGenerationProvider : public GenerationProvider {
public:
    explicit ScriptedGenerationProvider(std::string model = "mock-scripted");

    std::string generate(const std::string& prompt, std::size_t max_new_units,
                         double temperature) override;
    std::string model_name() const override { return model_; }

    void respond_with(std::string response) { default_response_ = std::move(response); }
    void respond_when(std::string payload_substring, std::string response);
    // The next `n` calls throw ProviderUnavailable.
    void fail_next(std::size_t n) { fail_remaining_ = n; }
    // The next `n` calls return an empty string.
    void blank_next(std::size_t n) { blank_remaining_ = n; }

    std::size_t call_count() const noexcept { return calls_; }

private:
    std::string model_;
    std::string default_response_;
    std::vector<std::pair<std::string, std::string>> rules_;
    std::size_t fail_remaining_ = 0;
    std::size_t blank_remaining_ = 0;
    std::size_t calls_ = 0;
    std::mutex mutex_;
};

} // namespace trisearch::providers
