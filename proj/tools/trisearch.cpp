// trisearch: index, search, calibrate, evaluate and serve over one codebase.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 provider error.

#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "trisearch/core/errors.hpp"
#include "trisearch/core/parallel.hpp"
#include "trisearch/eval/pipeline.hpp"
#include "trisearch/fusion/calibration.hpp"
#include "trisearch/indexer/build.hpp"
#include "trisearch/indexer/jsonl.hpp"
#include "trisearch/search/engine.hpp"
#include "trisearch/service/engine_config.hpp"
#include "trisearch/service/json_io.hpp"
#include "trisearch/service/server.hpp"

namespace ts = trisearch;
using nlohmann::json;

namespace {

int exit_code_for(ts::ErrorKind kind) {
    switch (kind) {
    case ts::ErrorKind::usage:
        return 1;
    case ts::ErrorKind::data:
        return 2;
    case ts::ErrorKind::provider:
        return 3;
    }
    return 1;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw ts::DataError("cannot write " + path);
    out << content;
}

ts::FusionWeights parse_weights_flag(const std::string& flag) {
    double a = 0, b = 0, g = 0;
    char sep1 = 0, sep2 = 0;
    std::istringstream in(flag);
    if (!(in >> a >> sep1 >> b >> sep2 >> g) || sep1 != ',' || sep2 != ',')
        throw ts::ParameterError("--weights expects alpha,beta,gamma");
    return ts::FusionWeights(a, b, g, ts::WeightOrigin::manual);
}

ts::service::SearchServer* g_server = nullptr;

void handle_signal(int) {
    if (g_server != nullptr)
        g_server->stop();
}

struct CommonArgs {
    std::string config_path = "trisearch.json";
    std::string index_path; // overrides the config when set
};

ts::service::EngineConfig load_config(const CommonArgs& args) {
    auto cfg = ts::service::EngineConfig::from_file(args.config_path);
    if (!args.index_path.empty())
        cfg.index_path = args.index_path;
    return cfg;
}

int cmd_index(const CommonArgs& common, const std::string& codebase_path,
              const std::string& codebase_id) {
    const auto cfg = load_config(common);
    auto providers = cfg.make_providers();
    ts::indexer::EmbeddingCache cache(cfg.cache_path);

    const auto codebase = ts::indexer::read_codebase_jsonl(codebase_path);
    std::cerr << "indexing " << codebase.size() << " snippets from " << codebase_path << "\n";

    ts::indexer::BuildOptions options;
    options.codebase_id = codebase_id.empty() ? codebase_path : codebase_id;
    options.concurrency = cfg.concurrency;
    ts::indexer::BuildStats stats;
    const auto index = ts::indexer::build_index(codebase, providers, cache, options, &stats);
    ts::indexer::save_index(index, cfg.index_path);

    std::cerr << "wrote " << stats.entries << " entries to " << cfg.index_path << "\n"
              << stats.provider_requests() << " provider calls ("
              << stats.generation_cache_hits + stats.embedding_cache_hits << " cache hits), "
              << stats.fallback_comments << " comment fallbacks\n";
    return 0;
}

int cmd_search(const CommonArgs& common, const std::string& query_text,
               const std::string& language, std::size_t top_k, const std::string& weights_flag,
               const std::string& strategy_flag, bool full_json, bool pretty) {
    const auto cfg = load_config(common);
    auto providers = cfg.make_providers();
    const auto index = ts::indexer::load_index(cfg.index_path, cfg.expected_fingerprints());

    ts::search::SearchRequest request;
    request.query = {"cli", query_text, language};
    request.top_k = top_k;
    request.weights = weights_flag.empty() ? cfg.weights : parse_weights_flag(weights_flag);
    request.strategy = strategy_flag.empty() ? cfg.strategy
                                             : ts::search::strategy_from_name(strategy_flag);
    request.normalize_scores = cfg.normalize_scores;

    const auto response = ts::search::search(request, index, providers, cfg.strategy_params);

    if (pretty) {
        std::printf("%-6s %-24s %10s %8s %8s %8s\n", "rank", "candidate", "fused", "qc", "qm",
                    "cg");
        for (const auto& e : response.result.entries)
            std::printf("%-6d %-24s %10.6f %8.4f %8.4f %8.4f\n", e.rank,
                        e.candidate_id.c_str(), e.fused_score, e.scores.qc, e.scores.qm,
                        e.scores.cg);
    } else if (full_json) {
        std::cout << ts::service::search_response_json(response).dump() << "\n";
    } else {
        for (const auto& e : response.result.entries)
            std::cout << ts::service::ranked_entry_json(e).dump() << "\n";
    }

    std::cerr << "generation " << response.timing.generation_ms << " ms, embedding "
              << response.timing.embedding_ms << " ms, scoring " << response.timing.scoring_ms
              << " ms" << (response.degraded ? " (degraded: generation fell back)" : "") << "\n";
    return 0;
}

// Builds a throwaway in-memory index over the pair codes and scores every
// query against it; one embedding pass serves the whole grid.
ts::fusion::ScoreTable score_pairs(const ts::fusion::CalibrationSet& cal,
                                   const ts::providers::ProviderSet& providers,
                                   ts::indexer::EmbeddingCache& cache, std::size_t concurrency) {
    ts::indexer::BuildOptions options;
    options.codebase_id = "calibration-slice";
    options.concurrency = concurrency;
    const auto index = ts::indexer::build_index(cal.codebase, providers, cache, options);

    ts::fusion::ScoreTable table;
    std::mutex table_mutex;
    ts::parallel_for(cal.instances.size(), concurrency, [&](std::size_t i) {
        const auto& inst = cal.instances[i];
        auto scored = ts::search::score_candidates(inst.query, index, providers, 1);
        std::lock_guard lock(table_mutex);
        table[inst.query.id] = std::move(scored.scores);
    });
    return table;
}

ts::fusion::CalibrationSet pairs_to_calibration_set(const std::vector<ts::indexer::PairRecord>& pairs,
                                                    const std::string& dataset_id) {
    ts::fusion::CalibrationSet cal;
    cal.dataset_id = dataset_id;
    cal.instances.reserve(pairs.size());
    cal.codebase.reserve(pairs.size());
    for (const auto& p : pairs) {
        cal.instances.push_back({{p.id, p.query, p.language}, p.id});
        cal.codebase.push_back({p.id, p.code, p.language});
    }
    return cal;
}

int cmd_calibrate(const CommonArgs& common, const std::string& data_path, double step,
                  const std::string& out_path, const std::string& csv_path) {
    const auto cfg = load_config(common);
    auto providers = cfg.make_providers();
    ts::indexer::EmbeddingCache cache(cfg.cache_path);

    const auto pairs = ts::indexer::read_pairs_jsonl(data_path);
    if (pairs.empty())
        throw ts::CalibrationDataError("calibration file " + data_path + " holds no pairs");
    const auto cal = pairs_to_calibration_set(pairs, data_path);

    std::cerr << "scoring " << cal.instances.size() << " instances against a slice of "
              << cal.codebase.size() << " snippets\n";
    const auto table = score_pairs(cal, providers, cache, cfg.concurrency);

    const auto report = ts::fusion::calibrate(cal, table, step);
    std::cerr << report.surface.size() << " grid points evaluated at step " << step << "\n";

    const json doc = ts::service::calibration_report_json(report);
    if (!out_path.empty())
        write_file(out_path, doc.dump(2) + "\n");
    if (!csv_path.empty())
        write_file(csv_path, ts::service::surface_csv(report.surface));

    std::cout << doc["best_weights"].dump() << "\n";
    return 0;
}

int cmd_evaluate(const CommonArgs& common, const std::string& dataset_path,
                 const std::vector<std::string>& strategy_names, const std::string& out_path,
                 const std::string& csv_path, bool pretty) {
    const auto cfg = load_config(common);
    auto providers = cfg.make_providers();
    const auto index = ts::indexer::load_index(cfg.index_path, cfg.expected_fingerprints());

    const auto pairs = ts::indexer::read_pairs_jsonl(dataset_path);
    if (pairs.empty())
        throw ts::EvalInputError("dataset " + dataset_path + " holds no pairs");

    std::vector<ts::Query> queries;
    ts::eval::EvalDataset truth;
    for (const auto& p : pairs) {
        queries.push_back({p.id, p.query, p.language});
        truth.truth[p.id] = {p.id};
    }
    // Every ground-truth id must exist in the loaded index.
    {
        std::set<std::string> known;
        for (const auto& e : index.entries)
            known.insert(e.snippet.id);
        for (const auto& p : pairs) {
            if (!known.contains(p.id))
                throw ts::EvalInputError("ground-truth id " + p.id + " not in the index");
        }
    }

    ts::eval::PipelineOptions options;
    options.weights = cfg.weights;
    options.params = cfg.strategy_params;
    options.concurrency = cfg.concurrency;
    options.strategies.clear();
    for (const auto& name : strategy_names)
        options.strategies.push_back(ts::search::strategy_from_name(name));

    const auto result = ts::eval::evaluate_pipeline(queries, truth, index, providers, options);

    const json doc = ts::service::pipeline_result_json(result);
    if (!out_path.empty())
        write_file(out_path, doc.dump(2) + "\n");
    if (!csv_path.empty())
        write_file(csv_path, ts::service::truth_ranks_csv(result.truth_ranks));

    if (pretty)
        std::cout << ts::service::strategy_table(result);
    else
        std::cout << doc.dump() << "\n";
    return 0;
}

int cmd_serve(const CommonArgs& common, int port_override) {
    const auto cfg = load_config(common);
    ts::service::SearchServer server(cfg);
    server.load_index();

    g_server = &server;
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);

    const int port = server.start(port_override);
    std::cerr << "serving on " << cfg.bind_address << ":" << port << "\n";
    while (server.running())
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    g_server = nullptr;
    std::cerr << "shut down\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"zero-shot cross-domain code search over fused matching schemas"};
    app.require_subcommand(1);

    CommonArgs common;
    app.add_option("--config", common.config_path, "engine config JSON")
        ->capture_default_str();
    app.add_option("--index", common.index_path, "index path (overrides the config)");

    auto* index_cmd = app.add_subcommand("index", "build an index from a codebase JSONL");
    std::string codebase_path, codebase_id;
    index_cmd->add_option("--codebase", codebase_path, "JSONL of {id, code, language}")
        ->required();
    index_cmd->add_option("--id", codebase_id, "codebase identifier stored in the index");

    auto* search_cmd = app.add_subcommand("search", "rank candidates for a query");
    std::string query_text, language = "code", weights_flag, strategy_flag;
    std::size_t top_k = 10;
    bool full_json = false, pretty = false;
    search_cmd->add_option("--query", query_text, "natural-language query")->required();
    search_cmd->add_option("--language", language, "target programming language");
    search_cmd->add_option("--top-k", top_k, "results to return")->capture_default_str();
    search_cmd->add_option("--weights", weights_flag, "alpha,beta,gamma");
    search_cmd->add_option("--strategy", strategy_flag,
                           "linear|combsum|combmnz|rrf|borda");
    search_cmd->add_flag("--full-json", full_json, "print the whole response as one JSON document");
    search_cmd->add_flag("--pretty", pretty, "human-readable table");

    auto* cal_cmd = app.add_subcommand("calibrate", "grid-search fusion weights on labeled pairs");
    std::string cal_data, cal_out, cal_csv;
    double cal_step = 0.05;
    cal_cmd->add_option("--data", cal_data, "JSONL of {id, query, code, language}")->required();
    cal_cmd->add_option("--step", cal_step, "grid step")->capture_default_str();
    cal_cmd->add_option("--out", cal_out, "write the report JSON here");
    cal_cmd->add_option("--csv", cal_csv, "write the objective surface as CSV");

    auto* eval_cmd = app.add_subcommand("evaluate", "score retrieval quality on labeled pairs");
    std::string eval_data, eval_out, eval_csv;
    std::vector<std::string> eval_strategies{"linear"};
    bool eval_pretty = false;
    eval_cmd->add_option("--dataset", eval_data, "JSONL of {id, query, code, language}")
        ->required();
    eval_cmd->add_option("--strategies", eval_strategies, "fusion strategies to compare")
        ->delimiter(',')
        ->capture_default_str();
    eval_cmd->add_option("--out", eval_out, "write the report JSON here");
    eval_cmd->add_option("--csv", eval_csv, "write per-query truth ranks as CSV");
    eval_cmd->add_flag("--pretty", eval_pretty, "human-readable table");

    auto* serve_cmd = app.add_subcommand("serve", "run the HTTP search service");
    int port_override = -1;
    serve_cmd->add_option("--port", port_override, "port (overrides the config; 0 = ephemeral)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (index_cmd->parsed())
            return cmd_index(common, codebase_path, codebase_id);
        if (search_cmd->parsed())
            return cmd_search(common, query_text, language, top_k, weights_flag, strategy_flag,
                              full_json, pretty);
        if (cal_cmd->parsed())
            return cmd_calibrate(common, cal_data, cal_step, cal_out, cal_csv);
        if (eval_cmd->parsed())
            return cmd_evaluate(common, eval_data, eval_strategies, eval_out, eval_csv,
                                eval_pretty);
        if (serve_cmd->parsed())
            return cmd_serve(common, port_override);
    } catch (const ts::Error& e) {
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return 1;
    }
    return 1;
}
