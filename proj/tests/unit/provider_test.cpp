#include <doctest.h>

#include <atomic>
#include <cmath>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "support/support.hpp"
#include "trisearch/providers/factory.hpp"
#include "trisearch/providers/http_provider.hpp"
#include "trisearch/providers/mock_provider.hpp"
#include "trisearch/providers/provider.hpp"

using namespace trisearch;
using namespace trisearch::providers;
using nlohmann::json;

namespace {

EmbeddingProviderConfig mock_cfg(std::size_t batch = 8) {
    auto cfg = EmbeddingProviderConfig::for_kind("mock://hash", "m", InputKind::code);
    cfg.batch_size = batch;
    return cfg;
}

} // namespace

TEST_SUITE("embed_batch") {
    TEST_CASE("single text yields one normalized vector") {
        test_support::VectorMapProvider provider(3);
        provider.set("x", {1, 0, 0});
        const std::vector<std::string> texts{"x"};
        const auto out = embed_batch(texts, mock_cfg(), provider);
        REQUIRE(out.size() == 1);
        CHECK(out[0].dim() == 3);
        CHECK(out[0].normalized());
        CHECK(out[0].values()[0] == doctest::Approx(1.0));
    }

    TEST_CASE("batch of three keeps cardinality and equal dims") {
        HashEmbeddingProvider provider(16);
        const std::vector<std::string> texts{"a", "b", "c"};
        const auto out = embed_batch(texts, mock_cfg(2), provider);
        REQUIRE(out.size() == 3);
        for (const auto& v : out)
            CHECK(v.dim() == 16);
        // batch_size 2 forces two transport calls
        CHECK(provider.call_count() == 2);
    }

    TEST_CASE("same text embeds identically across calls") {
        HashEmbeddingProvider provider(24);
        const std::vector<std::string> texts{"deterministic input"};
        const auto first = embed_batch(texts, mock_cfg(), provider);
        const auto second = embed_batch(texts, mock_cfg(), provider);
        CHECK(first[0] == second[0]);
    }

    TEST_CASE("every outgoing vector is unit length") {
        test_support::VectorMapProvider provider(4);
        provider.set("long", {3, 4, 0, 0});
        const std::vector<std::string> texts{"long", "whatever else"};
        const auto out = embed_batch(texts, mock_cfg(), provider);
        for (const auto& v : out)
            CHECK(std::fabs(v.l2_norm() - 1.0) < 1e-6);
    }

    TEST_CASE("empty input is rejected") {
        HashEmbeddingProvider provider(8);
        CHECK_THROWS_AS(embed_batch({}, mock_cfg(), provider), ParameterError);
    }

    TEST_CASE("inputs are truncated to the configured limit before transport") {
        struct Capture : EmbeddingProvider {
            std::vector<std::string> seen;
            std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override {
                std::vector<EmbeddingVector> out;
                for (const auto& t : texts) {
                    seen.push_back(t);
                    out.push_back(EmbeddingVector({1, 0}, false));
                }
                return out;
            }
            ProviderFingerprint fingerprint() const override { return {"mock://cap", "cap", 2}; }
        } capture;

        auto cfg = mock_cfg();
        cfg.max_input_length = 2;
        const std::vector<std::string> texts{"one two three four"};
        embed_batch(texts, cfg, capture);
        REQUIRE(capture.seen.size() == 1);
        CHECK(capture.seen[0] == "one two");
    }
}

TEST_SUITE("generation") {
    TEST_CASE("echo mock passes the payload through") {
        ScriptedGenerationProvider provider;
        provider.respond_with("adds two numbers");
        GenerationProviderConfig cfg;
        cfg.model_name = "mock-scripted";
        const CodeSnippet code{"s1", "int add(int a,int b){return a+b;}", "cpp"};
        const auto comment =
            generate_comment(code, cfg, provider, PromptTemplate::summarize_default());
        CHECK(comment.text == "adds two numbers");
        CHECK_FALSE(comment.fallback);
        CHECK_FALSE(comment.truncated);
        CHECK(comment.generator == "mock-scripted");
    }

    TEST_CASE("fenced responses are unfenced") {
        ScriptedGenerationProvider provider;
        provider.respond_with("```sql\nSELECT 1;\n```");
        GenerationProviderConfig cfg;
        const Query query{"q1", "select the constant one", "sql"};
        const auto gen = generate_code(query, cfg, provider, PromptTemplate::generate_default());
        CHECK(gen.source == "SELECT 1;");
        CHECK_FALSE(gen.fallback);
    }

    TEST_CASE("three blank responses fall back to the code text") {
        ScriptedGenerationProvider provider;
        provider.blank_next(3);
        GenerationProviderConfig cfg;
        cfg.retries = 2;
        const CodeSnippet code{"s1", "SELECT a FROM b;", "sql"};
        const auto comment =
            generate_comment(code, cfg, provider, PromptTemplate::summarize_default());
        CHECK(comment.fallback);
        CHECK(comment.text == "SELECT a FROM b;");
        CHECK(provider.call_count() == 3);
    }

    TEST_CASE("transport failures fall back to the query text") {
        ScriptedGenerationProvider provider;
        provider.fail_next(10);
        GenerationProviderConfig cfg;
        cfg.retries = 1;
        const Query query{"q1", "list all users", "sql"};
        const auto gen = generate_code(query, cfg, provider, PromptTemplate::generate_default());
        CHECK(gen.fallback);
        CHECK(gen.source == "list all users");
        CHECK(provider.call_count() == 2); // retries + 1
    }

    TEST_CASE("long outputs are truncated with the flag set") {
        std::string longtext;
        for (int i = 0; i < 300; ++i)
            longtext += "word" + std::to_string(i) + " ";
        ScriptedGenerationProvider provider;
        provider.respond_with(longtext);
        GenerationProviderConfig cfg; // 128-unit comment limit
        const CodeSnippet code{"s", "code", "sql"};
        const auto comment =
            generate_comment(code, cfg, provider, PromptTemplate::summarize_default());
        CHECK(comment.truncated);
        CHECK(count_units(comment.text, LengthUnit::words) == 128);
    }

    TEST_CASE("a successful retry avoids the fallback") {
        ScriptedGenerationProvider provider;
        provider.fail_next(1);
        provider.respond_with("works now");
        GenerationProviderConfig cfg;
        cfg.retries = 2;
        const CodeSnippet code{"s", "code text", "sql"};
        const auto comment =
            generate_comment(code, cfg, provider, PromptTemplate::summarize_default());
        CHECK_FALSE(comment.fallback);
        CHECK(comment.text == "works now");
    }
}

TEST_SUITE("http transport") {
    struct MockServer {
        httplib::Server server;
        std::thread thread;
        int port = 0;
        std::atomic<int> embed_calls{0};
        std::atomic<int> chat_calls{0};
        std::atomic<int> fail_first{0}; // 500s issued before success
        std::string last_auth;
        std::size_t dim = 4;
        bool inconsistent_dims = false;

        MockServer() {
            server.Post("/v1/embeddings", [this](const httplib::Request& req,
                                                 httplib::Response& res) {
                embed_calls.fetch_add(1);
                last_auth = req.get_header_value("Authorization");
                if (fail_first.fetch_sub(1) > 0) {
                    res.status = 500;
                    return;
                }
                fail_first.store(0);
                const json body = json::parse(req.body);
                json data = json::array();
                std::size_t i = 0;
                for (const auto& input : body["input"]) {
                    const std::size_t d = inconsistent_dims && i == 1 ? dim + 1 : dim;
                    json emb = json::array();
                    const std::string text = input.get<std::string>();
                    for (std::size_t j = 0; j < d; ++j)
                        emb.push_back(0.25 + static_cast<double>((text.size() + j) % 7));
                    data.push_back({{"embedding", emb}, {"index", i}});
                    ++i;
                }
                res.set_content(json{{"data", data}}.dump(), "application/json");
            });
            server.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                       httplib::Response& res) {
                chat_calls.fetch_add(1);
                last_auth = req.get_header_value("Authorization");
                const json body = json::parse(req.body);
                const std::string prompt = body["messages"][0]["content"].get<std::string>();
                res.set_content(
                    json{{"choices",
                          json::array({{{"message",
                                         {{"role", "assistant"},
                                          {"content", "echo: " + prompt.substr(0, 16)}}}}})}}
                        .dump(),
                    "application/json");
            });
            port = server.bind_to_any_port("127.0.0.1");
            thread = std::thread([this] { server.listen_after_bind(); });
            server.wait_until_ready();
        }

        ~MockServer() {
            server.stop();
            thread.join();
        }

        std::string endpoint() const {
            return "http://127.0.0.1:" + std::to_string(port) + "/v1";
        }
    };

    TransportOptions fast_transport() {
        TransportOptions t;
        t.retries = 2;
        t.backoff_initial_ms = 1;
        t.backoff_max_ms = 2;
        t.timeout_ms = 5000;
        return t;
    }

    TEST_CASE("embeddings round-trip with bearer auth") {
        MockServer mock;
        setenv("TRISEARCH_TEST_TOKEN", "sekrit", 1);
        auto cfg = EmbeddingProviderConfig::for_kind(mock.endpoint(), "embed-model",
                                                     InputKind::code);
        cfg.auth_secret_ref = "TRISEARCH_TEST_TOKEN";
        HttpEmbeddingProvider provider(cfg, fast_transport());

        const std::vector<std::string> texts{"SELECT 1;", "SELECT 2;"};
        const auto out = embed_batch(texts, cfg, provider);
        REQUIRE(out.size() == 2);
        CHECK(out[0].dim() == 4);
        CHECK(mock.last_auth == "Bearer sekrit");
        CHECK(provider.fingerprint().model == "embed-model");
        CHECK(provider.fingerprint().dim == 4);
    }

    TEST_CASE("missing auth env fails before any socket work") {
        unsetenv("TRISEARCH_MISSING_TOKEN");
        auto cfg = EmbeddingProviderConfig::for_kind("http://127.0.0.1:1/v1", "m",
                                                     InputKind::code);
        cfg.auth_secret_ref = "TRISEARCH_MISSING_TOKEN";
        CHECK_THROWS_AS(HttpEmbeddingProvider(cfg, fast_transport()), ConfigError);
    }

    TEST_CASE("5xx responses are retried until success") {
        MockServer mock;
        mock.fail_first.store(2);
        auto cfg = EmbeddingProviderConfig::for_kind(mock.endpoint(), "m", InputKind::code);
        HttpEmbeddingProvider provider(cfg, fast_transport());
        const std::vector<std::string> texts{"x"};
        const auto out = embed_batch(texts, cfg, provider);
        CHECK(out.size() == 1);
        CHECK(mock.embed_calls.load() == 3);
    }

    TEST_CASE("exhausted retries raise ProviderUnavailable") {
        MockServer mock;
        mock.fail_first.store(100);
        auto cfg = EmbeddingProviderConfig::for_kind(mock.endpoint(), "m", InputKind::code);
        HttpEmbeddingProvider provider(cfg, fast_transport());
        const std::vector<std::string> texts{"x"};
        CHECK_THROWS_AS(embed_batch(texts, cfg, provider), ProviderUnavailable);
        CHECK(mock.embed_calls.load() == 3); // retries + 1
    }

    TEST_CASE("unreachable host raises ProviderUnavailable") {
        auto cfg = EmbeddingProviderConfig::for_kind("http://127.0.0.1:9/v1", "m",
                                                     InputKind::code);
        TransportOptions t = fast_transport();
        t.retries = 0;
        t.timeout_ms = 200;
        HttpEmbeddingProvider provider(cfg, t);
        const std::vector<std::string> texts{"x"};
        CHECK_THROWS_AS(embed_batch(texts, cfg, provider), ProviderUnavailable);
    }

    TEST_CASE("dimension inconsistency within a batch is a contract error") {
        MockServer mock;
        mock.inconsistent_dims = true;
        auto cfg = EmbeddingProviderConfig::for_kind(mock.endpoint(), "m", InputKind::code);
        HttpEmbeddingProvider provider(cfg, fast_transport());
        const std::vector<std::string> texts{"a", "b"};
        CHECK_THROWS_AS(embed_batch(texts, cfg, provider), ProviderContractError);
    }

    TEST_CASE("chat completions carry model, prompt and decoding params") {
        MockServer mock;
        GenerationProviderConfig cfg;
        cfg.endpoint_url = mock.endpoint();
        cfg.model_name = "gen-model";
        HttpGenerationProvider provider(cfg, fast_transport());
        const std::string out = provider.generate("say hi", 32, 0.0);
        CHECK(out == "echo: say hi");
        CHECK(mock.chat_calls.load() == 1);
    }
}

TEST_SUITE("provider factory") {
    TEST_CASE("mock scheme builds in-process providers") {
        auto cfg = EmbeddingProviderConfig::for_kind("mock://hash?dim=12", "m", InputKind::code);
        auto provider = make_embedding_provider(cfg);
        const std::vector<std::string> texts{"x"};
        CHECK(provider->embed(texts)[0].dim() == 12);

        GenerationProviderConfig gen_cfg;
        gen_cfg.endpoint_url = "mock://echo";
        gen_cfg.model_name = "echo";
        auto gen = make_generation_provider(gen_cfg);
        CHECK(gen->generate("instruction\npayload", 10, 0.0) == "payload");
    }

    TEST_CASE("unknown mock endpoints are rejected") {
        auto cfg = EmbeddingProviderConfig::for_kind("mock://nope", "m", InputKind::code);
        CHECK_THROWS_AS(make_embedding_provider(cfg), ConfigError);
    }
}
