#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trisearch {

// Coarse error buckets. The CLI maps these to process exit codes:
// usage -> 1, data -> 2, provider -> 3.
enum class ErrorKind { usage, data, provider };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// A precondition or parameter violation at an API boundary.
class ParameterError : public Error {
public:
    explicit ParameterError(const std::string& m) : Error(ErrorKind::usage, m) {}
};

// Malformed or inconsistent configuration (missing env vars, bad file).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& m) : Error(ErrorKind::usage, m) {}
};

// Malformed input data (JSONL records, datasets).
class DataError : public Error {
public:
    explicit DataError(const std::string& m) : Error(ErrorKind::data, m) {}
};

class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& m) : Error(ErrorKind::data, m) {}
};

class DegenerateVectorError : public Error {
public:
    explicit DegenerateVectorError(const std::string& m) : Error(ErrorKind::data, m) {}
};

class DuplicateCandidateError : public Error {
public:
    explicit DuplicateCandidateError(const std::string& m) : Error(ErrorKind::data, m) {}
};

class TemplateError : public Error {
public:
    explicit TemplateError(const std::string& m) : Error(ErrorKind::data, m) {}
};

// Transport failure that survived the retry budget.
class ProviderUnavailable : public Error {
public:
    explicit ProviderUnavailable(const std::string& m) : Error(ErrorKind::provider, m) {}
};

// The remote endpoint answered, but not with what the protocol promises
// (wrong cardinality, inconsistent dimensions, missing fields).
class ProviderContractError : public Error {
public:
    explicit ProviderContractError(const std::string& m) : Error(ErrorKind::provider, m) {}
};

class EmptyCodebaseError : public Error {
public:
    explicit EmptyCodebaseError(const std::string& m) : Error(ErrorKind::data, m) {}
};

// Index build aborted mid-way (provider outage past the retry budget).
// Completed work is checkpointed in the embedding/generation cache; rerunning
// the same build resumes from there.
class BuildInterrupted : public Error {
public:
    BuildInterrupted(const std::string& m, std::size_t completed, std::string resume_hint)
        : Error(ErrorKind::provider, m), completed_(completed),
          resume_hint_(std::move(resume_hint)) {}

    std::size_t completed_entries() const noexcept { return completed_; }
    const std::string& resume_hint() const noexcept { return resume_hint_; }

private:
    std::size_t completed_;
    std::string resume_hint_;
};

// Persisted index does not match the configured providers.
class IndexIncompatible : public Error {
public:
    explicit IndexIncompatible(const std::string& m) : Error(ErrorKind::data, m) {}
};

class IndexCorrupt : public Error {
public:
    IndexCorrupt(const std::string& m, std::size_t byte_offset)
        : Error(ErrorKind::data, m), offset_(byte_offset) {}

    std::size_t byte_offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class CalibrationDataError : public Error {
public:
    explicit CalibrationDataError(const std::string& m) : Error(ErrorKind::data, m) {}
};

class EvalInputError : public Error {
public:
    explicit EvalInputError(const std::string& m) : Error(ErrorKind::data, m) {}
};

} // namespace trisearch
