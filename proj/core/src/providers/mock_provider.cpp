#include "trisearch/providers/mock_provider.hpp"

#include <cmath>

#include "trisearch/core/errors.hpp"

namespace trisearch::providers {

namespace {

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
    std::uint64_t h = 14695981039346656037ull ^ seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// splitmix64; fully specified, unlike the standard distributions.
std::uint64_t next_u64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double next_unit_double(std::uint64_t& state) {
    return static_cast<double>(next_u64(state) >> 11) * 0x1.0p-53;
}

} // namespace

HashEmbeddingProvider::HashEmbeddingProvider(std::size_t dim, std::string model,
                                             std::uint64_t seed, std::string endpoint)
    : dim_(dim), model_(std::move(model)), seed_(seed), endpoint_(std::move(endpoint)) {
    if (dim_ == 0)
        throw ParameterError("mock embedding dimension must be positive");
}

EmbeddingVector HashEmbeddingProvider::vector_for(const std::string& text) const {
    std::uint64_t state = fnv1a64(model_, seed_) ^ fnv1a64(text, ~seed_);

    // Box-Muller over splitmix64 gives an isotropic direction.
    std::vector<float> values(dim_);
    for (std::size_t i = 0; i < dim_; i += 2) {
        double u1 = next_unit_double(state);
        double u2 = next_unit_double(state);
        if (u1 <= 0.0)
            u1 = 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        values[i] = static_cast<float>(r * std::cos(2.0 * M_PI * u2));
        if (i + 1 < dim_)
            values[i + 1] = static_cast<float>(r * std::sin(2.0 * M_PI * u2));
    }

    double norm = 0.0;
    for (float v : values)
        norm += static_cast<double>(v) * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) {
        values[0] = 1.0f;
        norm = 1.0;
    }
    for (float& v : values)
        v = static_cast<float>(v / norm);
    return EmbeddingVector(std::move(values), true);
}

std::vector<EmbeddingVector> HashEmbeddingProvider::embed(std::span<const std::string> texts) {
    calls_.fetch_add(1);
    texts_.fetch_add(texts.size());
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts)
        out.push_back(vector_for(t));
    return out;
}

ProviderFingerprint HashEmbeddingProvider::fingerprint() const {
    return {endpoint_, model_, dim_};
}

void HashEmbeddingProvider::reset_counters() noexcept {
    calls_.store(0);
    texts_.store(0);
}

EchoGenerationProvider::EchoGenerationProvider(std::string model) : model_(std::move(model)) {}

std::string EchoGenerationProvider::generate(const std::string& prompt,
                                             std::size_t /*max_new_units*/,
                                             double /*temperature*/) {
    calls_.fetch_add(1);
    const std::size_t nl = prompt.find('\n');
    if (nl == std::string::npos)
        return prompt;
    return prompt.substr(nl + 1);
}

ScriptedGenerationProvider::ScriptedGenerationProvider(std::string model)
    : model_(std::move(model)) {}

void ScriptedGenerationProvider::respond_when(std::string payload_substring,
                                              std::string response) {
    std::lock_guard lock(mutex_);
    rules_.emplace_back(std::move(payload_substring), std::move(response));
}

std::string ScriptedGenerationProvider::generate(const std::string& prompt,
                                                 std::size_t /*max_new_units*/,
                                                 double /*temperature*/) {
    std::lock_guard lock(mutex_);
    ++calls_;
    if (fail_remaining_ > 0) {
        --fail_remaining_;
        throw ProviderUnavailable("scripted failure");
    }
    if (blank_remaining_ > 0) {
        --blank_remaining_;
        return "";
    }
    for (const auto& [needle, response] : rules_) {
        if (prompt.find(needle) != std::string::npos)
            return response;
    }
    return default_response_;
}

} // namespace trisearch::providers
