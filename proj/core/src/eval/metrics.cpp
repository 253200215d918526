#include "trisearch/eval/metrics.hpp"

#include <algorithm>

#include "trisearch/core/errors.hpp"

namespace trisearch::eval {

const std::vector<std::string>& EvalDataset::relevant_for(const std::string& query_id) const {
    auto it = truth.find(query_id);
    if (it == truth.end())
        throw EvalInputError("no ground truth for query " + query_id);
    return it->second;
}

std::size_t truth_rank(const RankedResult& ranked, const std::vector<std::string>& relevant) {
    std::size_t best = 0;
    for (const auto& entry : ranked.entries) {
        if (std::find(relevant.begin(), relevant.end(), entry.candidate_id) != relevant.end()) {
            const auto rank = static_cast<std::size_t>(entry.rank);
            if (best == 0 || rank < best)
                best = rank;
        }
    }
    return best;
}

EvalReport evaluate_rankings(const std::vector<RankedResult>& ranked, const EvalDataset& truth) {
    if (ranked.empty())
        throw EvalInputError("no rankings to evaluate");

    EvalReport report;
    report.per_query.reserve(ranked.size());

    const int ks[] = {1, 5, 10};
    std::map<int, std::size_t> hits;
    double rr_sum = 0.0;

    for (const RankedResult& r : ranked) {
        const std::size_t rank = truth_rank(r, truth.relevant_for(r.query_id));
        const double rr = rank == 0 ? 0.0 : 1.0 / static_cast<double>(rank);
        rr_sum += rr;
        report.per_query.emplace_back(r.query_id, rr);
        for (int k : ks) {
            if (rank != 0 && rank <= static_cast<std::size_t>(k))
                ++hits[k];
        }
    }

    report.mrr = rr_sum / static_cast<double>(ranked.size());
    for (int k : ks)
        report.top_k_accuracy[k] =
            static_cast<double>(hits[k]) / static_cast<double>(ranked.size());
    return report;
}

double mrr(const std::vector<RankedResult>& ranked, const EvalDataset& truth) {
    return evaluate_rankings(ranked, truth).mrr;
}

double top_k_accuracy(const std::vector<RankedResult>& ranked, const EvalDataset& truth, int k) {
    if (k < 1)
        throw ParameterError("k must be at least 1");
    double hits = 0.0;
    for (const RankedResult& r : ranked) {
        const std::size_t rank = truth_rank(r, truth.relevant_for(r.query_id));
        if (rank != 0 && rank <= static_cast<std::size_t>(k))
            hits += 1.0;
    }
    if (ranked.empty())
        throw EvalInputError("no rankings to evaluate");
    return hits / static_cast<double>(ranked.size());
}

} // namespace trisearch::eval
