#include <doctest.h>

#include <fstream>
#include <sstream>

#include "support/support.hpp"
#include "trisearch/providers/prompts.hpp"
#include "trisearch/providers/text.hpp"

using namespace trisearch;
using namespace trisearch::providers;

namespace {

std::string read_golden(const std::string& name) {
    const std::string path = std::string(TRISEARCH_TEST_DATA_DIR) + "/" + name;
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing golden file ", path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_SUITE("truncation") {
    TEST_CASE("word truncation preserves original spacing") {
        const auto r = truncate_text("one  two\tthree\nfour five", 3, LengthUnit::words);
        CHECK(r.truncated);
        CHECK(r.text == "one  two\tthree");
    }

    TEST_CASE("no-op below the limit") {
        const auto r = truncate_text("short text", 10, LengthUnit::words);
        CHECK_FALSE(r.truncated);
        CHECK(r.text == "short text");
    }

    TEST_CASE("char truncation cuts bytes") {
        const auto r = truncate_text("abcdef", 4, LengthUnit::chars);
        CHECK(r.truncated);
        CHECK(r.text == "abcd");
    }

    TEST_CASE("idempotence over random inputs") {
        test_support::Rng rng(2024);
        const char alphabet[] = "ab c\td\n ef{};()";
        for (int trial = 0; trial < 300; ++trial) {
            std::string text;
            const std::size_t len = rng.index(120);
            for (std::size_t i = 0; i < len; ++i)
                text.push_back(alphabet[rng.index(sizeof(alphabet) - 1)]);
            const std::size_t limit = 1 + rng.index(12);
            const LengthUnit unit = rng.index(2) == 0 ? LengthUnit::words : LengthUnit::chars;

            const auto once = truncate_text(text, limit, unit);
            const auto twice = truncate_text(once.text, limit, unit);
            CHECK(twice.text == once.text);
            CHECK_FALSE(twice.truncated);
            CHECK(count_units(once.text, unit) <= limit);
        }
    }
}

TEST_SUITE("fence stripping") {
    TEST_CASE("plain fences are removed") {
        CHECK(strip_code_fences("```\nSELECT 1;\n```") == "SELECT 1;");
    }

    TEST_CASE("language tag on the opening fence is removed") {
        CHECK(strip_code_fences("```sql\nSELECT 1;\n```") == "SELECT 1;");
        CHECK(strip_code_fences("  ```solidity\nfunction f() {}\n```  \n") == "function f() {}");
    }

    TEST_CASE("unfenced text only gets trimmed") {
        CHECK(strip_code_fences("  adds two numbers \n") == "adds two numbers");
    }

    TEST_CASE("inline backticks survive") {
        CHECK(strip_code_fences("uses `x` internally") == "uses `x` internally");
    }

    TEST_CASE("multi-line fenced body keeps inner layout") {
        const std::string fenced = "```python\ndef f(x):\n    return x + 1\n```";
        CHECK(strip_code_fences(fenced) == "def f(x):\n    return x + 1");
    }

    TEST_CASE("golden transcripts") {
        // input/expected pairs separated by a NUL-free marker line
        const std::string raw = read_golden("fence_cases.txt");
        std::istringstream in(raw);
        std::string line, input, expected;
        int state = 0, cases = 0;
        auto run_case = [&]() {
            if (state == 2) {
                // trailing newlines from the block join are part of framing
                CHECK(strip_code_fences(input) == providers::trim(expected));
                ++cases;
            }
            input.clear();
            expected.clear();
        };
        while (std::getline(in, line)) {
            if (line == "--- input") {
                run_case();
                state = 1;
            } else if (line == "--- expect") {
                state = 2;
            } else if (state == 1) {
                input += (input.empty() ? "" : "\n") + line;
            } else if (state == 2) {
                expected += (expected.empty() ? "" : "\n") + line;
            }
        }
        run_case();
        CHECK(cases >= 3);
    }
}

TEST_SUITE("prompts") {
    TEST_CASE("summarize prompt renders the golden text") {
        const auto prompt = render_prompt(PromptTemplate::summarize_default(), "Solidity",
                                          "function f(){}");
        CHECK(prompt == read_golden("prompt_summarize.golden.txt"));
        CHECK(prompt.rfind("Below is a Solidity code that describes a task.", 0) == 0);
    }

    TEST_CASE("generate prompt renders the golden text") {
        const auto prompt =
            render_prompt(PromptTemplate::generate_default(), "SQL", "list all users");
        CHECK(prompt == read_golden("prompt_generate.golden.txt"));
        CHECK(prompt.find("Write a code for the following query in SQL without comments.") !=
              std::string::npos);
    }

    TEST_CASE("payload braces are preserved and never re-substituted") {
        const std::string payload = "function f() { mapping(x => {language}) m; }";
        const auto prompt =
            render_prompt(PromptTemplate::summarize_default(), "Solidity", payload);
        CHECK(prompt.find(payload) != std::string::npos);
        // the only {language} left is the payload's own
        CHECK(prompt.find("Below is a Solidity code") == 0);
    }

    TEST_CASE("templates must carry their placeholders") {
        CHECK_THROWS_AS(PromptTemplate(PromptTask::summarize, "no placeholders"), TemplateError);
        CHECK_THROWS_AS(PromptTemplate(PromptTask::summarize, "{language} only"), TemplateError);
        CHECK_THROWS_AS(PromptTemplate(PromptTask::generate, "{language} {code}"), TemplateError);
        CHECK_NOTHROW(PromptTemplate(PromptTask::generate, "{language} {query}"));
    }

    TEST_CASE("unknown placeholders are rejected") {
        CHECK_THROWS_AS(PromptTemplate(PromptTask::summarize, "{language} {code} {oops}"),
                        TemplateError);
    }

    TEST_CASE("empty payload is rejected") {
        CHECK_THROWS_AS(render_prompt(PromptTemplate::summarize_default(), "SQL", ""),
                        ParameterError);
    }
}
