#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace trisearch::fusion {

// One schema's ranked output for a single query. Ranks are 1-based and
// contiguous; scores are non-increasing.
struct RunEntry {
    std::string candidate_id;
    double score = 0.0;
    std::size_t rank = 0;
};

using RunList = std::vector<RunEntry>;

// Sorts by score descending (ties by candidate id ascending) and assigns
// contiguous 1-based ranks.
RunList make_run_list(std::vector<std::pair<std::string, double>> scored);

struct FusedEntry {
    std::string candidate_id;
    double score = 0.0;
};

// Score-based aggregation: each candidate's scores are summed across runs,
// counting only appearances within a run's top-`recall`; candidates outside
// every top-`recall` score 0 and sort after all appearing candidates.
// With recall == universe size this reduces to an equally weighted linear
// combination of the run scores.
std::vector<FusedEntry> combsum(std::span<const RunList> runs, std::size_t recall = 10);

// combsum multiplied by the number of runs whose top-`recall` contains the
// candidate.
std::vector<FusedEntry> combmnz(std::span<const RunList> runs, std::size_t recall = 10);

// Reciprocal rank fusion over full-depth ranks: sum of 1 / (k + rank).
// k = 60 is the customary constant.
std::vector<FusedEntry> rrf(std::span<const RunList> runs, double k = 60.0);

// Borda count: sum of (N - rank) across runs, N the universe size; a
// last-place candidate contributes 0 from that run.
std::vector<FusedEntry> borda(std::span<const RunList> runs);

} // namespace trisearch::fusion
