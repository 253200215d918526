#pragma once

#include <memory>
#include <optional>

#include "trisearch/indexer/index.hpp"
#include "trisearch/service/engine_config.hpp"

namespace trisearch::service {

// HTTP search service over one loaded index.
//
//   GET  /healthz  200 with the index fingerprints once an index is loaded,
//                  503 before that
//   POST /search   {"query", "language", "top_k"?, "weights"?, "strategy"?}
//                  -> search response JSON; 400 on malformed bodies, 503 when
//                  an embedding provider is unreachable (query-side generation
//                  failures degrade instead and are flagged in the body)
//   GET  /metrics  request counts and handler latency percentiles, including
//                  handler overhead with provider time subtracted
//
// Handler concurrency is bounded by the config limit; stop() drains in-flight
// requests before returning. The process serves exactly one index; run one
// process per index for multi-domain deployments.
class SearchServer {
public:
    explicit SearchServer(EngineConfig config);
    ~SearchServer();

    SearchServer(const SearchServer&) = delete;
    SearchServer& operator=(const SearchServer&) = delete;

    // Loads the configured index (or an explicit one) and verifies provider
    // fingerprints. Search requests fail 503 until this succeeds.
    void load_index();
    void set_index(indexer::CodebaseIndex index);

    // Binds and serves on a background thread. port 0 picks an ephemeral
    // port; the bound port is returned.
    int start(int port_override = -1);
    void stop();
    bool running() const;
    int port() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace trisearch::service
