#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "trisearch/core/types.hpp"
#include "trisearch/eval/metrics.hpp"

namespace trisearch::eval {

// Set algebra over the queries each schema answers correctly at rank 1:
// the seven exclusive regions of the three-way Venn diagram, plus how many
// extra queries the union covers over each single schema.
struct ComplementarityReport {
    std::map<Schema, std::set<std::string>> correct; // rank-1-correct query ids

    // Exclusive regions; the seven cardinalities sum to |union|.
    std::size_t only_qc = 0;
    std::size_t only_qm = 0;
    std::size_t only_cg = 0;
    std::size_t qc_qm_only = 0; // in qc and qm, not cg
    std::size_t qc_cg_only = 0;
    std::size_t qm_cg_only = 0;
    std::size_t all_three = 0;

    std::size_t union_size = 0;
    // union gain over each schema: |union| - |schema|, and the same relative
    // to |schema| (0 when the schema answered nothing).
    std::map<Schema, std::size_t> union_gain;
    std::map<Schema, double> union_gain_ratio;

    std::size_t region_sum() const {
        return only_qc + only_qm + only_cg + qc_qm_only + qc_cg_only + qm_cg_only + all_three;
    }
};

// Per-schema rankings must cover the same queries; a query counts as correct
// for a schema when its rank-1 candidate is in the truth set.
ComplementarityReport complementarity(
    const std::map<Schema, std::vector<RankedResult>>& per_schema_rankings,
    const EvalDataset& truth);

} // namespace trisearch::eval
