#include "trisearch/indexer/jsonl.hpp"

#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "trisearch/core/errors.hpp"
#include "trisearch/providers/text.hpp"

namespace trisearch::indexer {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, std::size_t line,
                       const std::string& why) {
    throw DataError(path.string() + ":" + std::to_string(line) + ": " + why);
}

std::string required_string(const json& obj, const char* field,
                            const std::filesystem::path& path, std::size_t line) {
    if (!obj.contains(field) || !obj[field].is_string())
        fail(path, line, std::string("missing or non-string field \"") + field + "\"");
    return obj[field].get<std::string>();
}

template <typename RowFn>
void for_each_line(const std::filesystem::path& path, RowFn&& fn) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open " + path.string());

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (providers::trim(line).empty())
            continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::exception& e) {
            fail(path, line_no, std::string("invalid JSON: ") + e.what());
        }
        if (!obj.is_object())
            fail(path, line_no, "expected a JSON object");
        fn(obj, line_no);
    }
}

} // namespace

std::vector<CodeSnippet> read_codebase_jsonl(const std::filesystem::path& path) {
    std::vector<CodeSnippet> snippets;
    std::unordered_set<std::string> ids;
    for_each_line(path, [&](const json& obj, std::size_t line_no) {
        CodeSnippet s;
        s.id = required_string(obj, "id", path, line_no);
        s.source = required_string(obj, "code", path, line_no);
        s.language = required_string(obj, "language", path, line_no);
        if (providers::trim(s.source).empty())
            fail(path, line_no, "empty code");
        if (!ids.insert(s.id).second)
            fail(path, line_no, "duplicate id \"" + s.id + "\"");
        snippets.push_back(std::move(s));
    });
    return snippets;
}

std::vector<PairRecord> read_pairs_jsonl(const std::filesystem::path& path) {
    std::vector<PairRecord> pairs;
    std::unordered_set<std::string> ids;
    for_each_line(path, [&](const json& obj, std::size_t line_no) {
        PairRecord p;
        p.id = required_string(obj, "id", path, line_no);
        p.query = required_string(obj, "query", path, line_no);
        p.code = required_string(obj, "code", path, line_no);
        p.language = required_string(obj, "language", path, line_no);
        if (providers::trim(p.query).empty())
            fail(path, line_no, "empty query");
        if (providers::trim(p.code).empty())
            fail(path, line_no, "empty code");
        if (!ids.insert(p.id).second)
            fail(path, line_no, "duplicate id \"" + p.id + "\"");
        pairs.push_back(std::move(p));
    });
    return pairs;
}

} // namespace trisearch::indexer
