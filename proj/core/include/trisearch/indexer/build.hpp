#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "trisearch/indexer/cache.hpp"
#include "trisearch/indexer/index.hpp"
#include "trisearch/providers/provider.hpp"

namespace trisearch::indexer {

struct BuildOptions {
    std::string codebase_id = "codebase";
    std::size_t concurrency = 8; // in-flight generation requests
};

struct BuildStats {
    std::size_t entries = 0;
    std::size_t fallback_comments = 0;
    std::size_t generation_cache_hits = 0;
    std::size_t embedding_cache_hits = 0;
    std::size_t generation_requests = 0; // texts actually sent to the generator
    std::size_t embedding_requests = 0;  // texts actually sent to embedding providers

    std::size_t provider_requests() const noexcept {
        return generation_requests + embedding_requests;
    }
};

// Offline codebase processing: one generated comment per snippet, the code
// embedded in the query-code and code-code spaces, the comment embedded in
// the query-comment space. Completed generations and embeddings land in the
// cache first, so a build that dies mid-way (BuildInterrupted) resumes from
// where it stopped on the next run.
CodebaseIndex build_index(const std::vector<CodeSnippet>& codebase,
                          const providers::ProviderSet& providers, EmbeddingCache& cache,
                          const BuildOptions& options = {}, BuildStats* stats = nullptr);

} // namespace trisearch::indexer
