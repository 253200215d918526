#include "trisearch/providers/factory.hpp"

#include <charconv>

#include "trisearch/core/errors.hpp"
#include "trisearch/providers/http_provider.hpp"
#include "trisearch/providers/mock_provider.hpp"

namespace trisearch::providers {

namespace {

constexpr std::string_view kMockScheme = "mock://";

bool is_mock(const std::string& url) {
    return url.rfind(kMockScheme, 0) == 0;
}

std::size_t parse_mock_dim(const std::string& url) {
    const std::string_view marker = "dim=";
    const std::size_t pos = url.find(marker);
    if (pos == std::string::npos)
        return 64;
    std::size_t dim = 0;
    const char* begin = url.data() + pos + marker.size();
    const char* end = url.data() + url.size();
    auto [ptr, ec] = std::from_chars(begin, end, dim);
    if (ec != std::errc() || dim == 0)
        throw ConfigError("invalid dim in mock endpoint: " + url);
    return dim;
}

} // namespace

std::shared_ptr<EmbeddingProvider> make_embedding_provider(const EmbeddingProviderConfig& cfg,
                                                           TransportOptions transport) {
    if (is_mock(cfg.endpoint_url)) {
        if (cfg.endpoint_url.find("hash") == std::string::npos)
            throw ConfigError("unknown mock embedding endpoint: " + cfg.endpoint_url);
        return std::make_shared<HashEmbeddingProvider>(parse_mock_dim(cfg.endpoint_url),
                                                       cfg.model_name, 0, cfg.endpoint_url);
    }
    return std::make_shared<HttpEmbeddingProvider>(cfg, transport);
}

std::shared_ptr<GenerationProvider> make_generation_provider(const GenerationProviderConfig& cfg,
                                                             TransportOptions transport) {
    if (is_mock(cfg.endpoint_url)) {
        if (cfg.endpoint_url.find("echo") == std::string::npos)
            throw ConfigError("unknown mock generation endpoint: " + cfg.endpoint_url);
        return std::make_shared<EchoGenerationProvider>(cfg.model_name);
    }
    // generate_comment/generate_code own the retry budget; the transport
    // itself does not re-attempt.
    transport.retries = 0;
    return std::make_shared<HttpGenerationProvider>(cfg, transport);
}

} // namespace trisearch::providers
