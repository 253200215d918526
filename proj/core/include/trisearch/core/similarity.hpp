#pragma once

#include <string>
#include <utility>
#include <vector>

#include "trisearch/core/types.hpp"

namespace trisearch {

// Cosine similarity dot(a,b) / (|a| |b|), computed in double precision and
// clamped to [-1, 1] to absorb rounding at the boundary.
// Throws DimensionError on mismatched dims, DegenerateVectorError on a
// zero vector.
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

// Single-space form: all four vectors come from one embedding provider.
// s_qc = cos(q, c), s_qm = cos(q, m), s_cg = cos(c, g).
SchemaScores schema_scores(const EmbeddingVector& q_vec, const EmbeddingVector& c_vec,
                           const EmbeddingVector& m_vec, const EmbeddingVector& g_vec);

// Per-space form: each schema may use its own provider, so the query and the
// candidate code each carry one vector per space they participate in.
// A similarity is only ever computed between two vectors from the same space.
SchemaScores schema_scores(const EmbeddingVector& q_vec_qc, const EmbeddingVector& c_vec_qc,
                           const EmbeddingVector& q_vec_qm, const EmbeddingVector& m_vec,
                           const EmbeddingVector& c_vec_cc, const EmbeddingVector& g_vec);

// Weighted sum of the three schema scores.
double fuse_linear(const SchemaScores& scores, const FusionWeights& w);

// Sorts candidates by fused score descending, ties broken by candidate id
// ascending, and assigns 1-based ranks. Candidate ids must be unique.
RankedResult rank_candidates(const std::vector<std::pair<std::string, SchemaScores>>& per_candidate,
                             const FusionWeights& w, std::string query_id = {});

} // namespace trisearch
