#pragma once

#include <map>
#include <string>
#include <vector>

#include "trisearch/core/types.hpp"

namespace trisearch::eval {

// Ground truth: each query id maps to the ids counted as relevant. The
// engine's datasets carry exactly one per query; when several are present the
// best-ranked one scores.
struct EvalDataset {
    std::map<std::string, std::vector<std::string>> truth; // query id -> relevant ids

    const std::vector<std::string>& relevant_for(const std::string& query_id) const;
};

struct EvalReport {
    double mrr = 0.0;
    std::map<int, double> top_k_accuracy; // k in {1, 5, 10}
    // query id -> reciprocal rank (0 when the truth never appears)
    std::vector<std::pair<std::string, double>> per_query;
    double wall_clock_ms = 0.0;
};

// Rank of the best-ranked relevant candidate, or 0 if none appears.
std::size_t truth_rank(const RankedResult& ranked, const std::vector<std::string>& relevant);

// Mean reciprocal rank over the queries; a query whose truth is absent from
// its ranking contributes 0.
double mrr(const std::vector<RankedResult>& ranked, const EvalDataset& truth);

// Fraction of queries whose truth ranks within the top k.
double top_k_accuracy(const std::vector<RankedResult>& ranked, const EvalDataset& truth, int k);

// Both metrics plus per-query reciprocal ranks in one pass.
EvalReport evaluate_rankings(const std::vector<RankedResult>& ranked, const EvalDataset& truth);

} // namespace trisearch::eval
