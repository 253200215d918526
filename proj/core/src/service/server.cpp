#include "trisearch/service/server.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>
#include <vector>

#include <httplib.h>

#include "trisearch/core/errors.hpp"
#include "trisearch/service/json_io.hpp"

namespace trisearch::service {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double percentile(std::vector<double> samples, double p) {
    if (samples.empty())
        return 0.0;
    std::sort(samples.begin(), samples.end());
    const double pos = p * static_cast<double>(samples.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, samples.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return samples[lo] * (1.0 - frac) + samples[hi] * frac;
}

// Request counters plus handler latency samples per endpoint.
class Metrics {
public:
    void observe(const std::string& endpoint, double total_ms, double overhead_ms) {
        std::lock_guard lock(mutex_);
        auto& slot = by_endpoint_[endpoint];
        ++slot.count;
        slot.total_ms.push_back(total_ms);
        slot.overhead_ms.push_back(overhead_ms);
    }

    json snapshot() const {
        std::lock_guard lock(mutex_);
        json requests = json::object();
        json latency = json::object();
        for (const auto& [endpoint, slot] : by_endpoint_) {
            requests[endpoint] = slot.count;
            latency[endpoint] = {{"count", slot.count},
                                 {"p50_ms", percentile(slot.total_ms, 0.50)},
                                 {"p90_ms", percentile(slot.total_ms, 0.90)},
                                 {"p99_ms", percentile(slot.total_ms, 0.99)},
                                 {"overhead_p99_ms", percentile(slot.overhead_ms, 0.99)}};
        }
        return json{{"requests", std::move(requests)}, {"latency", std::move(latency)}};
    }

private:
    struct Slot {
        std::size_t count = 0;
        std::vector<double> total_ms;
        std::vector<double> overhead_ms;
    };
    mutable std::mutex mutex_;
    std::map<std::string, Slot> by_endpoint_;
};

} // namespace

struct SearchServer::Impl {
    EngineConfig config;
    providers::ProviderSet providers;
    std::optional<indexer::CodebaseIndex> index;
    httplib::Server server;
    std::thread serve_thread;
    std::atomic<bool> running{false};
    int bound_port = 0;
    Metrics metrics;

    explicit Impl(EngineConfig cfg)
        : config(std::move(cfg)), providers(config.make_providers()) {
        server.new_task_queue = [this] {
            return new httplib::ThreadPool(config.concurrency);
        };
        register_routes();
    }

    void register_routes() {
        server.Get("/healthz", [this](const httplib::Request&, httplib::Response& res) {
            const auto start = Clock::now();
            if (!index) {
                res.status = 503;
                res.set_content(json{{"status", "unavailable"},
                                     {"reason", "index not loaded"}}
                                    .dump(),
                                "application/json");
            } else {
                json fingerprints = json::object();
                for (const auto& [schema, fp] : index->fingerprints) {
                    fingerprints[std::string(schema_key(schema))] = {
                        {"endpoint", fp.endpoint}, {"model", fp.model}, {"dim", fp.dim}};
                }
                res.set_content(json{{"status", "ok"},
                                     {"entries", index->entries.size()},
                                     {"codebase_id", index->codebase_id},
                                     {"fingerprints", std::move(fingerprints)}}
                                    .dump(),
                                "application/json");
            }
            const double ms =
                std::chrono::duration<double, std::milli>(Clock::now() - start).count();
            metrics.observe("healthz", ms, ms);
        });

        server.Post("/search", [this](const httplib::Request& req, httplib::Response& res) {
            const auto start = Clock::now();
            double provider_ms = 0.0;
            handle_search(req, res, provider_ms);
            const double ms =
                std::chrono::duration<double, std::milli>(Clock::now() - start).count();
            metrics.observe("search", ms, std::max(0.0, ms - provider_ms));
        });

        server.Get("/metrics", [this](const httplib::Request&, httplib::Response& res) {
            res.set_content(metrics.snapshot().dump(), "application/json");
        });
    }

    void handle_search(const httplib::Request& req, httplib::Response& res,
                       double& provider_ms) {
        if (!index) {
            res.status = 503;
            res.set_content(json{{"error", "index not loaded"}}.dump(), "application/json");
            return;
        }

        search::SearchRequest request;
        try {
            const json body = json::parse(req.body);
            if (!body.is_object() || !body.contains("query") || !body["query"].is_string())
                throw ParameterError("body needs a string \"query\"");
            request.query.text = body["query"].get<std::string>();
            request.query.id = body.contains("query_id") && body["query_id"].is_string()
                                   ? body["query_id"].get<std::string>()
                                   : "query";
            request.query.language = body.contains("language") && body["language"].is_string()
                                         ? body["language"].get<std::string>()
                                         : "code";
            if (body.contains("top_k")) {
                if (!body["top_k"].is_number_unsigned() || body["top_k"].get<std::size_t>() == 0)
                    throw ParameterError("top_k must be a positive integer");
                request.top_k = body["top_k"].get<std::size_t>();
            }
            if (body.contains("weights"))
                request.weights = weights_from_json(body["weights"], WeightOrigin::manual);
            else
                request.weights = config.weights;
            request.strategy =
                body.contains("strategy") && body["strategy"].is_string()
                    ? search::strategy_from_name(body["strategy"].get<std::string>())
                    : config.strategy;
            request.normalize_scores = config.normalize_scores;
        } catch (const json::exception& e) {
            res.status = 400;
            res.set_content(json{{"error", std::string("malformed body: ") + e.what()}}.dump(),
                            "application/json");
            return;
        } catch (const ParameterError& e) {
            res.status = 400;
            res.set_content(json{{"error", e.what()}}.dump(), "application/json");
            return;
        }

        try {
            const search::SearchResponse response =
                search::search(request, *index, providers, config.strategy_params);
            provider_ms = response.timing.generation_ms + response.timing.embedding_ms;
            res.set_content(search_response_json(response).dump(), "application/json");
        } catch (const ProviderUnavailable& e) {
            res.status = 503;
            res.set_content(json{{"error", e.what()}, {"degraded", false}}.dump(),
                            "application/json");
        } catch (const Error& e) {
            res.status = e.kind() == ErrorKind::usage ? 400 : 500;
            res.set_content(json{{"error", e.what()}}.dump(), "application/json");
        }
    }
};

SearchServer::SearchServer(EngineConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

SearchServer::~SearchServer() {
    stop();
}

void SearchServer::load_index() {
    impl_->index = indexer::load_index(impl_->config.index_path,
                                       impl_->config.expected_fingerprints());
}

void SearchServer::set_index(indexer::CodebaseIndex index) {
    indexer::ensure_compatible(index, impl_->config.expected_fingerprints());
    impl_->index = std::move(index);
}

int SearchServer::start(int port_override) {
    if (impl_->running.load())
        throw ParameterError("server already running");

    const int want = port_override >= 0 ? port_override : impl_->config.port;
    const std::string host = impl_->config.bind_address;

    if (want == 0) {
        impl_->bound_port = impl_->server.bind_to_any_port(host);
        if (impl_->bound_port <= 0)
            throw ConfigError("cannot bind to " + host);
    } else {
        if (!impl_->server.bind_to_port(host, want))
            throw ConfigError("cannot bind to " + host + ":" + std::to_string(want));
        impl_->bound_port = want;
    }

    impl_->running.store(true);
    impl_->serve_thread = std::thread([this] {
        impl_->server.listen_after_bind();
        impl_->running.store(false);
    });

    impl_->server.wait_until_ready();
    return impl_->bound_port;
}

void SearchServer::stop() {
    if (impl_->serve_thread.joinable()) {
        impl_->server.stop(); // finishes in-flight handlers before returning
        impl_->serve_thread.join();
    }
    impl_->running.store(false);
}

bool SearchServer::running() const {
    return impl_->running.load();
}

int SearchServer::port() const {
    return impl_->bound_port;
}

} // namespace trisearch::service
