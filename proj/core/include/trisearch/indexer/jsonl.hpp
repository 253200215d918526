#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "trisearch/core/types.hpp"

namespace trisearch::indexer {

// A query paired with its relevant code snippet; the row format shared by
// calibration and evaluation datasets.
struct PairRecord {
    std::string id;
    std::string query;
    std::string code;
    std::string language;
};

// Reads a codebase file: one {"id", "code", "language"} object per line.
// Blank lines are skipped. Malformed lines and duplicate ids raise DataError
// naming the 1-based line number.
std::vector<CodeSnippet> read_codebase_jsonl(const std::filesystem::path& path);

// Reads a pair dataset: one {"id", "query", "code", "language"} per line.
std::vector<PairRecord> read_pairs_jsonl(const std::filesystem::path& path);

} // namespace trisearch::indexer
