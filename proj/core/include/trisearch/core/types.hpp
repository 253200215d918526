#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trisearch/core/errors.hpp"

namespace trisearch {

// The three matching schemas the engine scores and fuses.
enum class Schema { query_code, query_comment, code_code };

inline constexpr Schema kAllSchemas[] = {Schema::query_code, Schema::query_comment,
                                         Schema::code_code};

// Short wire/report names: "qc", "qm", "cg".
std::string_view schema_key(Schema s);
Schema schema_from_key(std::string_view key);

struct Query {
    std::string id;
    std::string text;     // natural-language request; non-empty after trimming
    std::string language; // target programming language, e.g. "solidity"
};

struct CodeSnippet {
    std::string id;
    std::string source;
    std::string language;
};

// Natural-language summary produced for a code snippet.
struct GeneratedComment {
    std::string text;
    std::string generator; // provider/model identifier
    bool truncated = false;
    bool fallback = false; // generation failed; text is the raw code

    friend bool operator==(const GeneratedComment&, const GeneratedComment&) = default;
};

// Code produced for a query.
struct GeneratedCode {
    std::string source;
    std::string generator;
    bool truncated = false;
    bool fallback = false; // generation failed; source is the query text

    friend bool operator==(const GeneratedCode&, const GeneratedCode&) = default;
};

// A query-candidate pair expanded with both generated artifacts. The comment
// derives from the candidate, the generated code derives from the query.
struct ExpandedTuple {
    Query query;
    CodeSnippet candidate;
    GeneratedComment comment;
    GeneratedCode gen_code;
};

// Fixed-dimension real vector as produced by an embedding provider.
// Construction rejects empty vectors and non-finite entries; a vector flagged
// normalized must have unit L2 norm within 1e-6.
class EmbeddingVector {
public:
    EmbeddingVector() = default;
    EmbeddingVector(std::vector<float> values, bool normalized);

    std::span<const float> values() const noexcept { return values_; }
    std::size_t dim() const noexcept { return values_.size(); }
    bool normalized() const noexcept { return normalized_; }
    double l2_norm() const noexcept;

    friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

private:
    std::vector<float> values_;
    bool normalized_ = false;
};

// Per-candidate similarity triple. Each component lies in [-1, 1] when
// produced by cosine similarity.
struct SchemaScores {
    double qc = 0.0; // query vs candidate code
    double qm = 0.0; // query vs generated comment
    double cg = 0.0; // candidate code vs generated code

    double get(Schema s) const noexcept;

    friend bool operator==(const SchemaScores&, const SchemaScores&) = default;
};

enum class WeightOrigin { defaults, calibrated, manual };

std::string_view weight_origin_name(WeightOrigin o);
WeightOrigin weight_origin_from_name(std::string_view name);

// Convex combination weights over the three schemas. Each weight lies in
// [0, 1] and they sum to 1 within 1e-9; violations are rejected at
// construction. Ranking under linear fusion is invariant to positive
// rescaling of the weight vector, so the simplex covers every distinct
// ordering.
class FusionWeights {
public:
    FusionWeights(double alpha, double beta, double gamma,
                  WeightOrigin origin = WeightOrigin::manual);

    // The stock configuration: (0.65, 0.25, 0.10).
    static FusionWeights defaults();
    // Unit weight on one schema, zero on the others.
    static FusionWeights unit(Schema s);

    double alpha() const noexcept { return alpha_; } // query-code weight
    double beta() const noexcept { return beta_; }   // query-comment weight
    double gamma() const noexcept { return gamma_; } // code-code weight
    double weight(Schema s) const noexcept;
    WeightOrigin origin() const noexcept { return origin_; }

    friend bool operator==(const FusionWeights& a, const FusionWeights& b) {
        return a.alpha_ == b.alpha_ && a.beta_ == b.beta_ && a.gamma_ == b.gamma_;
    }

private:
    double alpha_ = 0.0;
    double beta_ = 0.0;
    double gamma_ = 0.0;
    WeightOrigin origin_ = WeightOrigin::manual;
};

// Ordered candidate list for one query. Entries are sorted by fused score
// descending with ties broken by candidate id ascending; ranks are 1..N with
// no gaps.
struct RankedResult {
    struct Entry {
        std::string candidate_id;
        double fused_score = 0.0;
        SchemaScores scores;
        int rank = 0; // 1-based
    };

    std::string query_id;
    std::vector<Entry> entries;
};

} // namespace trisearch
