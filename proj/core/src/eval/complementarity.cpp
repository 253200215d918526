#include "trisearch/eval/complementarity.hpp"

#include <algorithm>

#include "trisearch/core/errors.hpp"

namespace trisearch::eval {

ComplementarityReport complementarity(
    const std::map<Schema, std::vector<RankedResult>>& per_schema_rankings,
    const EvalDataset& truth) {
    for (Schema s : kAllSchemas) {
        if (!per_schema_rankings.contains(s))
            throw EvalInputError("missing rankings for schema " + std::string(schema_key(s)));
    }

    ComplementarityReport report;
    for (Schema s : kAllSchemas) {
        auto& correct = report.correct[s];
        for (const RankedResult& r : per_schema_rankings.at(s)) {
            if (r.entries.empty())
                continue;
            const auto& relevant = truth.relevant_for(r.query_id);
            const std::string& top = r.entries.front().candidate_id;
            if (std::find(relevant.begin(), relevant.end(), top) != relevant.end())
                correct.insert(r.query_id);
        }
    }

    const auto& qc = report.correct[Schema::query_code];
    const auto& qm = report.correct[Schema::query_comment];
    const auto& cg = report.correct[Schema::code_code];

    std::set<std::string> all;
    all.insert(qc.begin(), qc.end());
    all.insert(qm.begin(), qm.end());
    all.insert(cg.begin(), cg.end());
    report.union_size = all.size();

    for (const std::string& id : all) {
        const bool a = qc.contains(id);
        const bool b = qm.contains(id);
        const bool c = cg.contains(id);
        if (a && b && c)
            ++report.all_three;
        else if (a && b)
            ++report.qc_qm_only;
        else if (a && c)
            ++report.qc_cg_only;
        else if (b && c)
            ++report.qm_cg_only;
        else if (a)
            ++report.only_qc;
        else if (b)
            ++report.only_qm;
        else
            ++report.only_cg;
    }

    for (Schema s : kAllSchemas) {
        const std::size_t own = report.correct[s].size();
        report.union_gain[s] = report.union_size - own;
        report.union_gain_ratio[s] =
            own == 0 ? 0.0 : static_cast<double>(report.union_size - own) / static_cast<double>(own);
    }
    return report;
}

} // namespace trisearch::eval
