#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trisearch/core/types.hpp"
#include "trisearch/providers/provider.hpp"

namespace trisearch::indexer {

// One snippet plus everything search needs: its generated comment and the
// embeddings of code and comment in their schema spaces. The code carries two
// vectors because query-code and code-code matching may use different models;
// when they share a provider the two are equal (computed once via the cache).
struct IndexEntry {
    CodeSnippet snippet;
    GeneratedComment comment;
    EmbeddingVector code_vec_qc; // code in the query-code space
    EmbeddingVector code_vec_cc; // code in the code-code space
    EmbeddingVector comment_vec; // comment in the query-comment space
};

using FingerprintMap = std::map<Schema, providers::ProviderFingerprint>;

struct CodebaseIndex {
    std::string codebase_id;
    std::vector<IndexEntry> entries;
    FingerprintMap fingerprints;
    std::int64_t created_at_ms = 0; // unix epoch milliseconds

    std::size_t size() const noexcept { return entries.size(); }
};

// Compares stored entries, vectors (bit-exact) and fingerprints; ignores the
// creation timestamp.
bool same_content(const CodebaseIndex& a, const CodebaseIndex& b);

// Binary container: "TSIX" header, fingerprints, then per-entry records with
// little-endian float32 vector blocks. A JSON sidecar (<path>.meta.json)
// mirrors the metadata for humans and tooling. Round-trips are bit-exact.
void save_index(const CodebaseIndex& index, const std::filesystem::path& path);

// Reads the container back. Truncated or garbled files raise IndexCorrupt
// carrying the byte offset of the offending record. When `expected` is given,
// endpoint/model per schema must match or IndexIncompatible is raised --
// an index is only meaningful under the providers that built it.
CodebaseIndex load_index(const std::filesystem::path& path,
                         const std::optional<FingerprintMap>& expected = std::nullopt);

// Fingerprint check used by search and the service at startup.
void ensure_compatible(const CodebaseIndex& index, const FingerprintMap& configured);

} // namespace trisearch::indexer
