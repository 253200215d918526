#include "trisearch/indexer/cache.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "trisearch/core/errors.hpp"

namespace trisearch::indexer {

namespace fs = std::filesystem;

namespace {

constexpr char kVectorMagic[4] = {'T', 'S', 'C', 'V'};
constexpr char kTextMagic[4] = {'T', 'S', 'C', 'T'};

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
    std::uint64_t h = 14695981039346656037ull ^ seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_name(std::string_view key_material) {
    const std::uint64_t a = fnv1a64(key_material, 0);
    const std::uint64_t b = fnv1a64(key_material, 0x9e3779b97f4a7c15ull);
    char buf[33];
    std::snprintf(buf, sizeof(buf), "%016llx%016llx", static_cast<unsigned long long>(a),
                  static_cast<unsigned long long>(b));
    return buf;
}

void write_u32(std::ostream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_string(std::ostream& os, std::string_view s) {
    write_u32(os, static_cast<std::uint32_t>(s.size()));
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

bool read_u32(std::istream& is, std::uint32_t& v) {
    return static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof(v)));
}

bool read_string(std::istream& is, std::string& s) {
    std::uint32_t len = 0;
    if (!read_u32(is, len))
        return false;
    s.resize(len);
    return static_cast<bool>(is.read(s.data(), len));
}

// Atomic publish: write to a temp sibling, then rename over the target.
void commit_file(const fs::path& target, const std::string& payload) {
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw DataError("cache: cannot write " + tmp.string());
        out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    }
    fs::rename(tmp, target);
}

std::string vector_key_material(const providers::ProviderFingerprint& fp,
                                const std::string& text) {
    return fp.key() + "\x1f" + text;
}

} // namespace

EmbeddingCache::EmbeddingCache(fs::path root) : root_(std::move(root)) {
    fs::create_directories(root_);
}

fs::path EmbeddingCache::vector_path(const providers::ProviderFingerprint& fp,
                                     const std::string& text) const {
    return root_ / (hash_name(vector_key_material(fp, text)) + ".vec");
}

fs::path EmbeddingCache::text_path(const std::string& generator_key,
                                   const std::string& input) const {
    return root_ / (hash_name(generator_key + "\x1f" + input) + ".txt");
}

std::optional<EmbeddingVector> EmbeddingCache::find_vector(
    const providers::ProviderFingerprint& fp, const std::string& text) const {
    std::ifstream in(vector_path(fp, text), std::ios::binary);
    if (!in)
        return std::nullopt;

    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kVectorMagic, 4) != 0)
        return std::nullopt;

    std::string stored_key, stored_text;
    if (!read_string(in, stored_key) || !read_string(in, stored_text))
        return std::nullopt;
    // Full-key verification turns a hash collision into a miss.
    if (stored_key != fp.key() || stored_text != text)
        return std::nullopt;

    std::uint32_t dim = 0, normalized = 0;
    if (!read_u32(in, dim) || !read_u32(in, normalized) || dim == 0)
        return std::nullopt;
    std::vector<float> values(dim);
    if (!in.read(reinterpret_cast<char*>(values.data()),
                 static_cast<std::streamsize>(dim * sizeof(float))))
        return std::nullopt;
    try {
        return EmbeddingVector(std::move(values), normalized != 0);
    } catch (const Error&) {
        return std::nullopt;
    }
}

void EmbeddingCache::store_vector(const providers::ProviderFingerprint& fp,
                                  const std::string& text, const EmbeddingVector& vec) {
    std::ostringstream payload;
    payload.write(kVectorMagic, 4);
    write_string(payload, fp.key());
    write_string(payload, text);
    write_u32(payload, static_cast<std::uint32_t>(vec.dim()));
    write_u32(payload, vec.normalized() ? 1 : 0);
    payload.write(reinterpret_cast<const char*>(vec.values().data()),
                  static_cast<std::streamsize>(vec.dim() * sizeof(float)));

    std::lock_guard lock(write_mutex_);
    commit_file(vector_path(fp, text), payload.str());
}

std::optional<std::string> EmbeddingCache::find_text(const std::string& generator_key,
                                                     const std::string& input) const {
    std::ifstream in(text_path(generator_key, input), std::ios::binary);
    if (!in)
        return std::nullopt;

    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kTextMagic, 4) != 0)
        return std::nullopt;
    std::string stored_key, stored_input, output;
    if (!read_string(in, stored_key) || !read_string(in, stored_input) ||
        !read_string(in, output))
        return std::nullopt;
    if (stored_key != generator_key || stored_input != input)
        return std::nullopt;
    return output;
}

void EmbeddingCache::store_text(const std::string& generator_key, const std::string& input,
                                const std::string& output) {
    std::ostringstream payload;
    payload.write(kTextMagic, 4);
    write_string(payload, generator_key);
    write_string(payload, input);
    write_string(payload, output);

    std::lock_guard lock(write_mutex_);
    commit_file(text_path(generator_key, input), payload.str());
}

bool EmbeddingCache::erase_vector(const providers::ProviderFingerprint& fp,
                                  const std::string& text) {
    std::lock_guard lock(write_mutex_);
    return fs::remove(vector_path(fp, text));
}

std::size_t EmbeddingCache::entry_count() const {
    std::size_t n = 0;
    for (const auto& entry : fs::directory_iterator(root_)) {
        if (entry.is_regular_file())
            ++n;
    }
    return n;
}

} // namespace trisearch::indexer
