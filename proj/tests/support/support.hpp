#pragma once

// Shared helpers for the test suites: deterministic RNG, random fixtures and
// scriptable in-process providers.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "trisearch/core/types.hpp"
#include "trisearch/providers/mock_provider.hpp"
#include "trisearch/providers/provider.hpp"

namespace test_support {

// splitmix64: tiny, seedable, identical everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    std::size_t index(std::size_t bound) { return next_u64() % bound; }
};

inline std::vector<float> random_vector(Rng& rng, std::size_t dim) {
    std::vector<float> v(dim);
    for (auto& x : v)
        x = static_cast<float>(rng.uniform(-1.0, 1.0));
    return v;
}

inline trisearch::EmbeddingVector random_embedding(Rng& rng, std::size_t dim) {
    auto v = random_vector(rng, dim);
    // keep at least one non-zero entry
    if (v[0] == 0.0f)
        v[0] = 0.5f;
    return trisearch::EmbeddingVector(std::move(v), false);
}

// Embedding provider with a fixed vector per exact input text. Unknown texts
// fall back to a seeded hash vector so pipelines never stall.
class VectorMapProvider : public trisearch::providers::EmbeddingProvider {
public:
    VectorMapProvider(std::size_t dim, std::string endpoint = "mock://map",
                      std::string model = "map")
        : dim_(dim), endpoint_(std::move(endpoint)), model_(std::move(model)) {}

    void set(const std::string& text, std::vector<float> values) {
        vectors_[text] = std::move(values);
    }

    std::vector<trisearch::EmbeddingVector>
    embed(std::span<const std::string> texts) override {
        ++calls_;
        texts_ += texts.size();
        std::vector<trisearch::EmbeddingVector> out;
        out.reserve(texts.size());
        for (const auto& t : texts) {
            auto it = vectors_.find(t);
            if (it != vectors_.end()) {
                out.emplace_back(it->second, false);
            } else {
                Rng rng(hash_text(t));
                out.push_back(random_embedding(rng, dim_));
            }
        }
        return out;
    }

    trisearch::providers::ProviderFingerprint fingerprint() const override {
        return {endpoint_, model_, dim_};
    }

    std::size_t call_count() const { return calls_; }
    std::size_t texts_embedded() const { return texts_; }

private:
    static std::uint64_t hash_text(const std::string& t) {
        std::uint64_t h = 14695981039346656037ull;
        for (unsigned char c : t) {
            h ^= c;
            h *= 1099511628211ull;
        }
        return h;
    }

    std::size_t dim_;
    std::string endpoint_;
    std::string model_;
    std::map<std::string, std::vector<float>> vectors_;
    std::size_t calls_ = 0;
    std::size_t texts_ = 0;
};

// A fully mock provider set over hash embeddings and the echo generator; the
// dims differ per space on purpose.
inline trisearch::providers::ProviderSet mock_provider_set(std::size_t dim_qc = 24,
                                                           std::size_t dim_qm = 16,
                                                           std::size_t dim_cc = 32) {
    using namespace trisearch::providers;
    trisearch::providers::ProviderSet set;
    set.query_code = std::make_shared<HashEmbeddingProvider>(dim_qc, "qc-model", 1);
    set.query_comment = std::make_shared<HashEmbeddingProvider>(dim_qm, "qm-model", 2);
    set.code_code = std::make_shared<HashEmbeddingProvider>(dim_cc, "cc-model", 3);
    set.generation = std::make_shared<EchoGenerationProvider>("echo");
    set.query_code_cfg = EmbeddingProviderConfig::for_kind("mock://hash", "qc-model",
                                                           InputKind::code);
    set.query_comment_cfg = EmbeddingProviderConfig::for_kind("mock://hash", "qm-model",
                                                              InputKind::natural_language);
    set.code_code_cfg = EmbeddingProviderConfig::for_kind("mock://hash", "cc-model",
                                                          InputKind::code);
    set.generation_cfg.endpoint_url = "mock://echo";
    set.generation_cfg.model_name = "echo";
    return set;
}

inline std::vector<trisearch::CodeSnippet> random_codebase(Rng& rng, std::size_t count,
                                                           const std::string& language = "sql") {
    std::vector<trisearch::CodeSnippet> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        trisearch::CodeSnippet s;
        s.id = "c" + std::to_string(i);
        s.source = "SELECT col" + std::to_string(rng.next_u64() % 1000) + " FROM t" +
                   std::to_string(i) + " WHERE x > " + std::to_string(rng.next_u64() % 100) + ";";
        s.language = language;
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace test_support
