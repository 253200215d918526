#include "trisearch/core/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace trisearch {

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim())
        throw DimensionError("cosine: dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                             std::to_string(b.dim()) + ")");

    const auto av = a.values();
    const auto bv = b.values();
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < av.size(); ++i) {
        const double x = av[i];
        const double y = bv[i];
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if (na == 0.0 || nb == 0.0)
        throw DegenerateVectorError("cosine: zero vector has no direction");

    const double value = dot / (std::sqrt(na) * std::sqrt(nb));
    return std::clamp(value, -1.0, 1.0);
}

namespace {

double cosine_for_schema(const EmbeddingVector& x, const EmbeddingVector& y, Schema s) {
    try {
        return cosine_similarity(x, y);
    } catch (const DimensionError& e) {
        throw DimensionError("schema " + std::string(schema_key(s)) + ": " + e.what());
    } catch (const DegenerateVectorError& e) {
        throw DegenerateVectorError("schema " + std::string(schema_key(s)) + ": " + e.what());
    }
}

} // namespace

SchemaScores schema_scores(const EmbeddingVector& q_vec, const EmbeddingVector& c_vec,
                           const EmbeddingVector& m_vec, const EmbeddingVector& g_vec) {
    return schema_scores(q_vec, c_vec, q_vec, m_vec, c_vec, g_vec);
}

SchemaScores schema_scores(const EmbeddingVector& q_vec_qc, const EmbeddingVector& c_vec_qc,
                           const EmbeddingVector& q_vec_qm, const EmbeddingVector& m_vec,
                           const EmbeddingVector& c_vec_cc, const EmbeddingVector& g_vec) {
    SchemaScores s;
    s.qc = cosine_for_schema(q_vec_qc, c_vec_qc, Schema::query_code);
    s.qm = cosine_for_schema(q_vec_qm, m_vec, Schema::query_comment);
    s.cg = cosine_for_schema(c_vec_cc, g_vec, Schema::code_code);
    return s;
}

double fuse_linear(const SchemaScores& scores, const FusionWeights& w) {
    return w.alpha() * scores.qc + w.beta() * scores.qm + w.gamma() * scores.cg;
}

RankedResult rank_candidates(
    const std::vector<std::pair<std::string, SchemaScores>>& per_candidate,
    const FusionWeights& w, std::string query_id) {
    std::unordered_set<std::string_view> seen;
    seen.reserve(per_candidate.size());
    for (const auto& [id, scores] : per_candidate) {
        if (!seen.insert(id).second)
            throw DuplicateCandidateError("duplicate candidate id: " + id);
    }

    RankedResult result;
    result.query_id = std::move(query_id);
    result.entries.reserve(per_candidate.size());
    for (const auto& [id, scores] : per_candidate)
        result.entries.push_back({id, fuse_linear(scores, w), scores, 0});

    std::sort(result.entries.begin(), result.entries.end(),
              [](const RankedResult::Entry& a, const RankedResult::Entry& b) {
                  if (a.fused_score != b.fused_score)
                      return a.fused_score > b.fused_score;
                  return a.candidate_id < b.candidate_id;
              });
    for (std::size_t i = 0; i < result.entries.size(); ++i)
        result.entries[i].rank = static_cast<int>(i) + 1;
    return result;
}

} // namespace trisearch
