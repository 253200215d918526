#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>

#include "trisearch/core/types.hpp"
#include "trisearch/providers/provider.hpp"

namespace trisearch::indexer {

// Content-addressed store keyed by hash(provider fingerprint, input text).
// Each entry is one file carrying the full key material, so hash collisions
// degrade to cache misses instead of wrong answers. Hits return vectors
// bit-identical to what was stored. Generated texts share the store, which
// makes interrupted index builds resumable: rerunning a build skips every
// generation and embedding already on disk.
//
// Concurrent readers and writers are safe; writes go through a temp file and
// an atomic rename, and identical keys always carry identical values, so a
// last-write-wins race is benign.
class EmbeddingCache {
public:
    explicit EmbeddingCache(std::filesystem::path root);

    std::optional<EmbeddingVector> find_vector(const providers::ProviderFingerprint& fp,
                                               const std::string& text) const;
    void store_vector(const providers::ProviderFingerprint& fp, const std::string& text,
                      const EmbeddingVector& vec);

    std::optional<std::string> find_text(const std::string& generator_key,
                                         const std::string& input) const;
    void store_text(const std::string& generator_key, const std::string& input,
                    const std::string& output);

    bool erase_vector(const providers::ProviderFingerprint& fp, const std::string& text);

    const std::filesystem::path& root() const noexcept { return root_; }
    std::size_t entry_count() const;

private:
    std::filesystem::path vector_path(const providers::ProviderFingerprint& fp,
                                      const std::string& text) const;
    std::filesystem::path text_path(const std::string& generator_key,
                                    const std::string& input) const;

    std::filesystem::path root_;
    mutable std::mutex write_mutex_;
};

} // namespace trisearch::indexer
