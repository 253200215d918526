#include "trisearch/fusion/run_list.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "trisearch/core/errors.hpp"

namespace trisearch::fusion {

namespace {

// All runs must cover one shared candidate universe with contiguous ranks.
void validate_runs(std::span<const RunList> runs) {
    if (runs.empty())
        throw ParameterError("fusion needs at least one run");
    const RunList& first = runs.front();
    std::unordered_set<std::string_view> universe;
    universe.reserve(first.size());
    for (const auto& e : first) {
        if (!universe.insert(e.candidate_id).second)
            throw DuplicateCandidateError("duplicate candidate in run: " + e.candidate_id);
    }
    for (const RunList& run : runs) {
        if (run.size() != first.size())
            throw ParameterError("runs cover different universe sizes");
        for (std::size_t i = 0; i < run.size(); ++i) {
            if (run[i].rank != i + 1)
                throw ParameterError("run ranks must be contiguous and 1-based");
            if (i > 0 && run[i - 1].score < run[i].score)
                throw ParameterError("run scores must be non-increasing");
            if (!universe.contains(run[i].candidate_id))
                throw ParameterError("runs disagree on the candidate universe: " +
                                     run[i].candidate_id);
        }
    }
}

// Deterministic fused ordering: score descending, candidate id ascending.
std::vector<FusedEntry> to_sorted_entries(std::map<std::string, double>&& accumulator) {
    std::vector<FusedEntry> out;
    out.reserve(accumulator.size());
    for (auto& [id, score] : accumulator)
        out.push_back({id, score});
    std::stable_sort(out.begin(), out.end(), [](const FusedEntry& a, const FusedEntry& b) {
        return a.score > b.score; // stable keeps id order on ties
    });
    return out;
}

std::vector<FusedEntry> comb_impl(std::span<const RunList> runs, std::size_t recall,
                                  bool multiply_by_hits) {
    if (recall < 1)
        throw ParameterError("recall must be at least 1");
    validate_runs(runs);

    std::map<std::string, double> sums;
    std::map<std::string, std::size_t> hits;
    for (const RunList& run : runs) {
        for (const auto& e : run) {
            sums.try_emplace(e.candidate_id, 0.0);
            if (e.rank <= recall) {
                sums[e.candidate_id] += e.score;
                ++hits[e.candidate_id];
            }
        }
    }
    if (multiply_by_hits) {
        for (auto& [id, score] : sums)
            score *= static_cast<double>(hits[id]);
    }
    return to_sorted_entries(std::move(sums));
}

} // namespace

RunList make_run_list(std::vector<std::pair<std::string, double>> scored) {
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second)
            return a.second > b.second;
        return a.first < b.first;
    });
    RunList run;
    run.reserve(scored.size());
    for (std::size_t i = 0; i < scored.size(); ++i)
        run.push_back({std::move(scored[i].first), scored[i].second, i + 1});
    return run;
}

std::vector<FusedEntry> combsum(std::span<const RunList> runs, std::size_t recall) {
    return comb_impl(runs, recall, false);
}

std::vector<FusedEntry> combmnz(std::span<const RunList> runs, std::size_t recall) {
    return comb_impl(runs, recall, true);
}

std::vector<FusedEntry> rrf(std::span<const RunList> runs, double k) {
    if (k <= 0.0)
        throw ParameterError("rrf constant must be positive");
    validate_runs(runs);

    std::map<std::string, double> sums;
    for (const RunList& run : runs) {
        for (const auto& e : run)
            sums[e.candidate_id] += 1.0 / (k + static_cast<double>(e.rank));
    }
    return to_sorted_entries(std::move(sums));
}

std::vector<FusedEntry> borda(std::span<const RunList> runs) {
    validate_runs(runs);
    const double universe = static_cast<double>(runs.front().size());

    std::map<std::string, double> sums;
    for (const RunList& run : runs) {
        for (const auto& e : run)
            sums[e.candidate_id] += universe - static_cast<double>(e.rank);
    }
    return to_sorted_entries(std::move(sums));
}

} // namespace trisearch::fusion
