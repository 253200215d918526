#pragma once

#include <memory>

#include "trisearch/providers/provider.hpp"

namespace trisearch::providers {

// Builds a provider from its config. Endpoint schemes:
//   http:// or https://   real HTTP JSON transport
//   mock://hash?dim=N     deterministic in-process embedding provider
//   mock://echo           in-process generator echoing the prompt payload
// The mock scheme exists for tests and offline smoke runs; it honors the
// same contracts as the HTTP transport.
std::shared_ptr<EmbeddingProvider> make_embedding_provider(const EmbeddingProviderConfig& cfg,
                                                           TransportOptions transport = {});

std::shared_ptr<GenerationProvider> make_generation_provider(const GenerationProviderConfig& cfg,
                                                             TransportOptions transport = {});

} // namespace trisearch::providers
