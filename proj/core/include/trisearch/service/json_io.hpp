#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "trisearch/core/types.hpp"
#include "trisearch/eval/pipeline.hpp"
#include "trisearch/fusion/calibration.hpp"
#include "trisearch/search/engine.hpp"

namespace trisearch::service {

// Canonical serializers shared by the CLI and the HTTP service, so the two
// surfaces emit byte-identical documents for identical inputs.

nlohmann::json ranked_entry_json(const RankedResult::Entry& entry);
nlohmann::json ranked_result_json(const RankedResult& result);
nlohmann::json search_response_json(const search::SearchResponse& response);

nlohmann::json eval_report_json(const eval::EvalReport& report);
nlohmann::json complementarity_json(const eval::ComplementarityReport& report);
nlohmann::json pipeline_result_json(const eval::PipelineResult& result);

nlohmann::json calibration_report_json(const fusion::CalibrationReport& report);

// CSV exports for plotting: the calibration surface and per-query ranks.
std::string surface_csv(const std::vector<fusion::GridPoint>& surface);
std::string truth_ranks_csv(
    const std::map<std::string, std::vector<std::pair<std::string, std::size_t>>>& ranks);

// Aligned-column text tables for human eyes.
std::string strategy_table(const eval::PipelineResult& result);

// Parses an optional {"alpha", "beta", "gamma"} object.
FusionWeights weights_from_json(const nlohmann::json& obj, WeightOrigin origin);

} // namespace trisearch::service
