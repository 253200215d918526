#include "trisearch/service/engine_config.hpp"

#include <cstdlib>
#include <fstream>

#include "trisearch/core/errors.hpp"
#include "trisearch/providers/factory.hpp"

namespace trisearch::service {

using nlohmann::json;

namespace {

// Replaces every ${VAR} with the environment value; unknown vars fail fast.
std::string interpolate_env(const std::string& value) {
    std::string out;
    out.reserve(value.size());
    std::size_t i = 0;
    while (i < value.size()) {
        if (value[i] == '$' && i + 1 < value.size() && value[i + 1] == '{') {
            const std::size_t close = value.find('}', i + 2);
            if (close == std::string::npos)
                throw ConfigError("unterminated ${ in config value: " + value);
            const std::string name = value.substr(i + 2, close - i - 2);
            const char* env = std::getenv(name.c_str());
            if (env == nullptr)
                throw ConfigError("config references unset env var: " + name);
            out += env;
            i = close + 1;
        } else {
            out.push_back(value[i++]);
        }
    }
    return out;
}

json interpolate(const json& doc) {
    if (doc.is_string())
        return interpolate_env(doc.get<std::string>());
    if (doc.is_object()) {
        json out = json::object();
        for (const auto& [key, value] : doc.items())
            out[key] = interpolate(value);
        return out;
    }
    if (doc.is_array()) {
        json out = json::array();
        for (const auto& value : doc)
            out.push_back(interpolate(value));
        return out;
    }
    return doc;
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key))
        return fallback;
    try {
        return obj[key].get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value for \"") + key + "\": " + e.what());
    }
}

providers::EmbeddingProviderConfig parse_embedding(const json& obj,
                                                   providers::InputKind kind,
                                                   const char* section) {
    if (!obj.contains("endpoint") || !obj.contains("model"))
        throw ConfigError(std::string("provider section \"") + section +
                          "\" needs endpoint and model");
    providers::EmbeddingProviderConfig cfg = providers::EmbeddingProviderConfig::for_kind(
        obj["endpoint"].get<std::string>(), obj["model"].get<std::string>(), kind);
    cfg.max_input_length = get_or<std::size_t>(obj, "max_input_units", cfg.max_input_length);
    cfg.length_unit = providers::length_unit_from_name(
        get_or<std::string>(obj, "unit", std::string(length_unit_name(cfg.length_unit))));
    cfg.batch_size = get_or<std::size_t>(obj, "batch_size", cfg.batch_size);
    cfg.auth_secret_ref = get_or<std::string>(obj, "auth_env", "");
    if (cfg.batch_size == 0)
        throw ConfigError(std::string(section) + ": batch_size must be positive");
    if (cfg.max_input_length == 0)
        throw ConfigError(std::string(section) + ": max_input_units must be positive");
    return cfg;
}

providers::GenerationProviderConfig parse_generation(const json& obj) {
    if (!obj.contains("endpoint") || !obj.contains("model"))
        throw ConfigError("provider section \"generation\" needs endpoint and model");
    providers::GenerationProviderConfig cfg;
    cfg.endpoint_url = obj["endpoint"].get<std::string>();
    cfg.model_name = obj["model"].get<std::string>();
    cfg.max_new_code = get_or<std::size_t>(obj, "max_code_units", cfg.max_new_code);
    cfg.max_new_comment = get_or<std::size_t>(obj, "max_comment_units", cfg.max_new_comment);
    cfg.length_unit = providers::length_unit_from_name(
        get_or<std::string>(obj, "unit", std::string(length_unit_name(cfg.length_unit))));
    cfg.temperature = get_or<double>(obj, "temperature", cfg.temperature);
    cfg.retries = get_or<std::size_t>(obj, "retries", cfg.retries);
    cfg.auth_secret_ref = get_or<std::string>(obj, "auth_env", "");
    if (cfg.max_new_code == 0 || cfg.max_new_comment == 0)
        throw ConfigError("generation: output limits must be positive");
    if (cfg.temperature < 0.0)
        throw ConfigError("generation: temperature must be >= 0");
    return cfg;
}

void check_auth_resolvable(const std::string& secret_ref, const char* section) {
    if (secret_ref.empty())
        return;
    const char* value = std::getenv(secret_ref.c_str());
    if (value == nullptr || *value == '\0')
        throw ConfigError(std::string(section) + ": auth env var not set: " + secret_ref);
}

} // namespace

EngineConfig EngineConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
    }
    return from_json(doc);
}

EngineConfig EngineConfig::from_json(const json& raw) {
    const json doc = interpolate(raw);
    if (!doc.is_object())
        throw ConfigError("config root must be a JSON object");
    if (!doc.contains("providers") || !doc["providers"].is_object())
        throw ConfigError("config needs a \"providers\" object");
    const json& prov = doc["providers"];
    for (const char* section : {"query_code", "query_comment", "code_code", "generation"}) {
        if (!prov.contains(section))
            throw ConfigError(std::string("providers section missing \"") + section + "\"");
    }

    EngineConfig cfg;
    // Stored vectors: code for the two code spaces, text for the comment one.
    cfg.query_code = parse_embedding(prov["query_code"], providers::InputKind::code,
                                     "query_code");
    cfg.query_comment = parse_embedding(prov["query_comment"],
                                        providers::InputKind::natural_language, "query_comment");
    cfg.code_code = parse_embedding(prov["code_code"], providers::InputKind::code, "code_code");
    cfg.generation = parse_generation(prov["generation"]);

    if (doc.contains("weights")) {
        const json& w = doc["weights"];
        try {
            cfg.weights = FusionWeights(w.at("alpha").get<double>(), w.at("beta").get<double>(),
                                        w.at("gamma").get<double>(), WeightOrigin::manual);
        } catch (const json::exception& e) {
            throw ConfigError(std::string("bad weights: ") + e.what());
        } catch (const ParameterError& e) {
            throw ConfigError(std::string("bad weights: ") + e.what());
        }
    }

    cfg.strategy = search::strategy_from_name(get_or<std::string>(doc, "strategy", "linear"));
    if (doc.contains("strategy_params")) {
        const json& p = doc["strategy_params"];
        cfg.strategy_params.combsum_recall =
            get_or<std::size_t>(p, "combsum_recall", cfg.strategy_params.combsum_recall);
        cfg.strategy_params.rrf_k = get_or<double>(p, "rrf_k", cfg.strategy_params.rrf_k);
    }
    cfg.normalize_scores = get_or<bool>(doc, "normalize_scores", false);

    cfg.index_path = get_or<std::string>(doc, "index_path", cfg.index_path);
    cfg.cache_path = get_or<std::string>(doc, "cache_path", cfg.cache_path);
    if (doc.contains("server")) {
        const json& s = doc["server"];
        cfg.bind_address = get_or<std::string>(s, "bind", cfg.bind_address);
        cfg.port = get_or<int>(s, "port", cfg.port);
    }
    cfg.concurrency = get_or<std::size_t>(doc, "concurrency", cfg.concurrency);
    if (cfg.concurrency == 0)
        throw ConfigError("concurrency must be positive");

    if (doc.contains("transport")) {
        const json& t = doc["transport"];
        cfg.transport.retries = get_or<std::size_t>(t, "retries", cfg.transport.retries);
        cfg.transport.backoff_initial_ms =
            get_or<std::size_t>(t, "backoff_initial_ms", cfg.transport.backoff_initial_ms);
        cfg.transport.backoff_max_ms =
            get_or<std::size_t>(t, "backoff_max_ms", cfg.transport.backoff_max_ms);
        cfg.transport.timeout_ms = get_or<std::size_t>(t, "timeout_ms", cfg.transport.timeout_ms);
    }
    return cfg;
}

providers::ProviderSet EngineConfig::make_providers() const {
    // Surface missing secrets before any socket work.
    check_auth_resolvable(query_code.auth_secret_ref, "query_code");
    check_auth_resolvable(query_comment.auth_secret_ref, "query_comment");
    check_auth_resolvable(code_code.auth_secret_ref, "code_code");
    check_auth_resolvable(generation.auth_secret_ref, "generation");

    providers::ProviderSet set;
    set.query_code = providers::make_embedding_provider(query_code, transport);
    set.query_comment = providers::make_embedding_provider(query_comment, transport);
    set.code_code = providers::make_embedding_provider(code_code, transport);
    set.generation = providers::make_generation_provider(generation, transport);
    set.query_code_cfg = query_code;
    set.query_comment_cfg = query_comment;
    set.code_code_cfg = code_code;
    set.generation_cfg = generation;
    return set;
}

indexer::FingerprintMap EngineConfig::expected_fingerprints() const {
    indexer::FingerprintMap map;
    map[Schema::query_code] = {query_code.endpoint_url, query_code.model_name, 0};
    map[Schema::query_comment] = {query_comment.endpoint_url, query_comment.model_name, 0};
    map[Schema::code_code] = {code_code.endpoint_url, code_code.model_name, 0};
    return map;
}

} // namespace trisearch::service
