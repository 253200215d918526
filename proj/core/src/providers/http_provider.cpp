#include "trisearch/providers/http_provider.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "trisearch/core/errors.hpp"

namespace trisearch::providers {

namespace {

using nlohmann::json;

struct ParsedUrl {
    std::string base;      // scheme://host[:port]
    std::string path_root; // possibly empty, no trailing slash
};

ParsedUrl parse_endpoint(const std::string& url) {
    const std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw ConfigError("endpoint url must include a scheme: " + url);
    const std::size_t path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos)
        return {url, ""};
    std::string root = url.substr(path_start);
    while (!root.empty() && root.back() == '/')
        root.pop_back();
    return {url.substr(0, path_start), root};
}

std::string resolve_auth(const std::string& secret_ref) {
    if (secret_ref.empty())
        return "";
    const char* value = std::getenv(secret_ref.c_str());
    if (value == nullptr || *value == '\0')
        throw ConfigError("auth env var not set: " + secret_ref);
    return value;
}

// Shared POST-with-retry plumbing for both endpoints.
class JsonTransport {
public:
    JsonTransport(const std::string& endpoint_url, const std::string& secret_ref,
                  TransportOptions opts)
        : url_(parse_endpoint(endpoint_url)), token_(resolve_auth(secret_ref)),
          opts_(opts) {}

    json post(const std::string& path, const json& body) const {
        const std::string full_path = url_.path_root + path;
        const std::string payload = body.dump();
        std::size_t backoff_ms = opts_.backoff_initial_ms;
        std::string last_error = "no attempt made";

        for (std::size_t attempt = 0; attempt <= opts_.retries; ++attempt) {
            if (attempt > 0) {
                std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
                backoff_ms = std::min(backoff_ms * 2, opts_.backoff_max_ms);
            }

            httplib::Client client(url_.base);
            client.set_connection_timeout(0, static_cast<long>(opts_.timeout_ms) * 1000);
            client.set_read_timeout(opts_.timeout_ms / 1000, (opts_.timeout_ms % 1000) * 1000);
            httplib::Headers headers;
            if (!token_.empty())
                headers.emplace("Authorization", "Bearer " + token_);

            auto res = client.Post(full_path, headers, payload, "application/json");
            if (!res) {
                last_error = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status >= 500 || res->status == 429) {
                last_error = "HTTP " + std::to_string(res->status);
                continue;
            }
            if (res->status != 200)
                throw ProviderContractError("HTTP " + std::to_string(res->status) + " from " +
                                            url_.base + full_path + ": " + res->body);
            try {
                return json::parse(res->body);
            } catch (const json::exception& e) {
                throw ProviderContractError(std::string("invalid JSON in response: ") + e.what());
            }
        }
        throw ProviderUnavailable(url_.base + full_path + " unreachable after " +
                                  std::to_string(opts_.retries + 1) + " attempts (" + last_error +
                                  ")");
    }

    const std::string& base() const noexcept { return url_.base; }

private:
    ParsedUrl url_;
    std::string token_;
    TransportOptions opts_;
};

} // namespace

struct HttpEmbeddingProvider::Impl {
    EmbeddingProviderConfig cfg;
    JsonTransport transport;
    std::atomic<std::size_t> known_dim{0};

    Impl(EmbeddingProviderConfig c, TransportOptions opts)
        : cfg(std::move(c)), transport(cfg.endpoint_url, cfg.auth_secret_ref, opts) {}
};

HttpEmbeddingProvider::HttpEmbeddingProvider(EmbeddingProviderConfig cfg,
                                             TransportOptions transport)
    : impl_(std::make_unique<Impl>(std::move(cfg), transport)) {}

HttpEmbeddingProvider::~HttpEmbeddingProvider() = default;

std::vector<EmbeddingVector> HttpEmbeddingProvider::embed(std::span<const std::string> texts) {
    json body;
    body["model"] = impl_->cfg.model_name;
    body["input"] = json::array();
    for (const auto& t : texts)
        body["input"].push_back(t);

    const json response = impl_->transport.post("/embeddings", body);
    if (!response.contains("data") || !response["data"].is_array())
        throw ProviderContractError("embeddings response missing data array");
    const auto& data = response["data"];
    if (data.size() != texts.size())
        throw ProviderContractError("embeddings response cardinality mismatch: sent " +
                                    std::to_string(texts.size()) + ", got " +
                                    std::to_string(data.size()));

    std::vector<EmbeddingVector> out(texts.size());
    std::size_t positional = 0;
    for (const auto& item : data) {
        if (!item.contains("embedding") || !item["embedding"].is_array())
            throw ProviderContractError("embeddings response item missing embedding array");
        std::size_t index = positional;
        if (item.contains("index") && item["index"].is_number_unsigned())
            index = item["index"].get<std::size_t>();
        if (index >= out.size())
            throw ProviderContractError("embeddings response index out of range");

        std::vector<float> values;
        values.reserve(item["embedding"].size());
        for (const auto& v : item["embedding"]) {
            if (!v.is_number())
                throw ProviderContractError("embedding entry is not a number");
            values.push_back(v.get<float>());
        }
        try {
            out[index] = EmbeddingVector(std::move(values), false);
        } catch (const ParameterError& e) {
            throw ProviderContractError(std::string("invalid embedding vector: ") + e.what());
        }
        ++positional;
    }

    const std::size_t dim = out.front().dim();
    impl_->known_dim.store(dim);
    return out;
}

ProviderFingerprint HttpEmbeddingProvider::fingerprint() const {
    return {impl_->cfg.endpoint_url, impl_->cfg.model_name, impl_->known_dim.load()};
}

struct HttpGenerationProvider::Impl {
    GenerationProviderConfig cfg;
    JsonTransport transport;

    Impl(GenerationProviderConfig c, TransportOptions opts)
        : cfg(std::move(c)), transport(cfg.endpoint_url, cfg.auth_secret_ref, opts) {}
};

HttpGenerationProvider::HttpGenerationProvider(GenerationProviderConfig cfg,
                                               TransportOptions transport)
    : impl_(std::make_unique<Impl>(std::move(cfg), transport)) {}

HttpGenerationProvider::~HttpGenerationProvider() = default;

std::string HttpGenerationProvider::generate(const std::string& prompt,
                                             std::size_t max_new_units, double temperature) {
    json body;
    body["model"] = impl_->cfg.model_name;
    body["messages"] = json::array({json{{"role", "user"}, {"content", prompt}}});
    body["max_tokens"] = max_new_units;
    body["temperature"] = temperature;

    const json response = impl_->transport.post("/chat/completions", body);
    if (!response.contains("choices") || !response["choices"].is_array() ||
        response["choices"].empty())
        throw ProviderContractError("chat response missing choices");
    const auto& message = response["choices"][0];
    if (!message.contains("message") || !message["message"].contains("content") ||
        !message["message"]["content"].is_string())
        throw ProviderContractError("chat response missing message content");
    return message["message"]["content"].get<std::string>();
}

std::string HttpGenerationProvider::model_name() const {
    return impl_->cfg.model_name;
}

} // namespace trisearch::providers
