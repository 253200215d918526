#include "trisearch/service/json_io.hpp"

#include <cstdio>
#include <sstream>

#include "trisearch/core/errors.hpp"

namespace trisearch::service {

using nlohmann::json;

json ranked_entry_json(const RankedResult::Entry& entry) {
    return json{{"candidate_id", entry.candidate_id},
                {"rank", entry.rank},
                {"fused_score", entry.fused_score},
                {"scores",
                 {{"qc", entry.scores.qc}, {"qm", entry.scores.qm}, {"cg", entry.scores.cg}}}};
}

json ranked_result_json(const RankedResult& result) {
    json entries = json::array();
    for (const auto& e : result.entries)
        entries.push_back(ranked_entry_json(e));
    return json{{"query_id", result.query_id}, {"results", std::move(entries)}};
}

json search_response_json(const search::SearchResponse& response) {
    return json{{"result", ranked_result_json(response.result)},
                {"gen_code",
                 {{"source", response.gen_code_echo.source},
                  {"generator", response.gen_code_echo.generator},
                  {"truncated", response.gen_code_echo.truncated},
                  {"fallback", response.gen_code_echo.fallback}}},
                {"degraded", response.degraded},
                {"timing",
                 {{"generation_ms", response.timing.generation_ms},
                  {"embedding_ms", response.timing.embedding_ms},
                  {"scoring_ms", response.timing.scoring_ms}}}};
}

json eval_report_json(const eval::EvalReport& report) {
    json per_query = json::array();
    for (const auto& [id, rr] : report.per_query)
        per_query.push_back({{"query_id", id}, {"reciprocal_rank", rr}});
    json top_k = json::object();
    for (const auto& [k, v] : report.top_k_accuracy)
        top_k["top_" + std::to_string(k)] = v;
    return json{{"mrr", report.mrr},
                {"top_k_accuracy", std::move(top_k)},
                {"per_query", std::move(per_query)},
                {"wall_clock_ms", report.wall_clock_ms}};
}

json complementarity_json(const eval::ComplementarityReport& report) {
    json correct = json::object();
    for (const auto& [schema, ids] : report.correct)
        correct[std::string(schema_key(schema))] = ids;
    json gains = json::object();
    for (const auto& [schema, gain] : report.union_gain) {
        gains[std::string(schema_key(schema))] = {
            {"absolute", gain}, {"ratio", report.union_gain_ratio.at(schema)}};
    }
    return json{{"correct_at_1", std::move(correct)},
                {"regions",
                 {{"only_qc", report.only_qc},
                  {"only_qm", report.only_qm},
                  {"only_cg", report.only_cg},
                  {"qc_qm_only", report.qc_qm_only},
                  {"qc_cg_only", report.qc_cg_only},
                  {"qm_cg_only", report.qm_cg_only},
                  {"all_three", report.all_three}}},
                {"union_size", report.union_size},
                {"union_gain", std::move(gains)}};
}

json pipeline_result_json(const eval::PipelineResult& result) {
    json strategies = json::object();
    for (const auto& [name, report] : result.per_strategy)
        strategies[name] = eval_report_json(report);
    json schemas = json::object();
    for (const auto& [schema, report] : result.per_schema)
        schemas[std::string(schema_key(schema))] = eval_report_json(report);
    return json{{"strategies", std::move(strategies)},
                {"schemas", std::move(schemas)},
                {"complementarity", complementarity_json(result.complementarity)},
                {"degraded_queries", result.degraded_queries},
                {"total_wall_ms", result.total_wall_ms}};
}

json calibration_report_json(const fusion::CalibrationReport& report) {
    json surface = json::array();
    for (const auto& p : report.surface) {
        surface.push_back({{"alpha", p.alpha},
                           {"beta", p.beta},
                           {"gamma", p.gamma},
                           {"objective", p.objective}});
    }
    return json{{"best_weights",
                 {{"alpha", report.best_weights.alpha()},
                  {"beta", report.best_weights.beta()},
                  {"gamma", report.best_weights.gamma()},
                  {"origin", std::string(weight_origin_name(report.best_weights.origin()))}}},
                {"grid_step", report.grid_step},
                {"grid_points", report.surface.size()},
                {"sampling_dataset_id", report.sampling_dataset_id},
                {"surface", std::move(surface)}};
}

std::string surface_csv(const std::vector<fusion::GridPoint>& surface) {
    std::ostringstream out;
    out << "alpha,beta,gamma,objective\n";
    char row[128];
    for (const auto& p : surface) {
        std::snprintf(row, sizeof(row), "%.6f,%.6f,%.6f,%.10f\n", p.alpha, p.beta, p.gamma,
                      p.objective);
        out << row;
    }
    return out.str();
}

std::string truth_ranks_csv(
    const std::map<std::string, std::vector<std::pair<std::string, std::size_t>>>& ranks) {
    std::ostringstream out;
    out << "strategy,query_id,truth_rank\n";
    for (const auto& [strategy, rows] : ranks) {
        for (const auto& [query_id, rank] : rows)
            out << strategy << "," << query_id << "," << rank << "\n";
    }
    return out.str();
}

std::string strategy_table(const eval::PipelineResult& result) {
    std::ostringstream out;
    char row[256];
    std::snprintf(row, sizeof(row), "%-16s %8s %8s %8s %8s\n", "run", "MRR", "top-1", "top-5",
                  "top-10");
    out << row;

    auto emit = [&](const std::string& name, const eval::EvalReport& r) {
        std::snprintf(row, sizeof(row), "%-16s %8.4f %8.4f %8.4f %8.4f\n", name.c_str(), r.mrr,
                      r.top_k_accuracy.at(1), r.top_k_accuracy.at(5), r.top_k_accuracy.at(10));
        out << row;
    };

    for (const auto& [schema, report] : result.per_schema)
        emit("schema:" + std::string(schema_key(schema)), report);
    for (const auto& [name, report] : result.per_strategy)
        emit(name, report);
    return out.str();
}

FusionWeights weights_from_json(const json& obj, WeightOrigin origin) {
    if (!obj.is_object() || !obj.contains("alpha") || !obj.contains("beta") ||
        !obj.contains("gamma"))
        throw ParameterError("weights must be an object with alpha, beta, gamma");
    try {
        return FusionWeights(obj["alpha"].get<double>(), obj["beta"].get<double>(),
                             obj["gamma"].get<double>(), origin);
    } catch (const json::exception& e) {
        throw ParameterError(std::string("bad weights: ") + e.what());
    }
}

} // namespace trisearch::service
