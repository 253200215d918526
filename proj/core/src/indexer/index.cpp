#include "trisearch/indexer/index.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "trisearch/core/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "index container assumes a little-endian host");

namespace trisearch::indexer {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'T', 'S', 'I', 'X'};
constexpr std::uint32_t kFormatVersion = 1;
// Guards against absurd string lengths in corrupted files.
constexpr std::uint32_t kMaxStringLen = 256u * 1024u * 1024u;

class Writer {
public:
    explicit Writer(const fs::path& path) : out_(path, std::ios::binary | std::ios::trunc) {
        if (!out_)
            throw DataError("cannot open " + path.string() + " for writing");
    }

    void u32(std::uint32_t v) { raw(&v, sizeof(v)); }
    void u64(std::uint64_t v) { raw(&v, sizeof(v)); }
    void i64(std::int64_t v) { raw(&v, sizeof(v)); }
    void u8(std::uint8_t v) { raw(&v, sizeof(v)); }

    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        raw(s.data(), s.size());
    }

    void floats(std::span<const float> values) {
        raw(values.data(), values.size() * sizeof(float));
    }

    void raw(const void* data, std::size_t size) {
        out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
        if (!out_)
            throw DataError("short write while saving index");
    }

private:
    std::ofstream out_;
};

class Reader {
public:
    explicit Reader(const fs::path& path) : in_(path, std::ios::binary), path_(path.string()) {
        if (!in_)
            throw DataError("cannot open " + path_ + " for reading");
    }

    std::size_t offset() const noexcept { return offset_; }

    std::uint32_t u32() {
        std::uint32_t v;
        raw(&v, sizeof(v));
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v;
        raw(&v, sizeof(v));
        return v;
    }
    std::int64_t i64() {
        std::int64_t v;
        raw(&v, sizeof(v));
        return v;
    }
    std::uint8_t u8() {
        std::uint8_t v;
        raw(&v, sizeof(v));
        return v;
    }

    std::string str() {
        const std::uint32_t len = u32();
        if (len > kMaxStringLen)
            corrupt("string length " + std::to_string(len) + " exceeds limit");
        std::string s(len, '\0');
        raw(s.data(), len);
        return s;
    }

    std::vector<float> floats(std::size_t count) {
        std::vector<float> values(count);
        raw(values.data(), count * sizeof(float));
        return values;
    }

    void raw(void* data, std::size_t size) {
        const std::size_t at = offset_;
        if (!in_.read(static_cast<char*>(data), static_cast<std::streamsize>(size)))
            throw IndexCorrupt(path_ + ": unexpected end of file at offset " + std::to_string(at),
                               at);
        offset_ += size;
    }

    [[noreturn]] void corrupt(const std::string& why) const {
        throw IndexCorrupt(path_ + ": " + why + " at offset " + std::to_string(offset_), offset_);
    }

    bool at_eof() {
        return in_.peek() == std::char_traits<char>::eof();
    }

private:
    std::ifstream in_;
    std::string path_;
    std::size_t offset_ = 0;
};

void write_fingerprint(Writer& w, const providers::ProviderFingerprint& fp) {
    w.str(fp.endpoint);
    w.str(fp.model);
    w.u32(static_cast<std::uint32_t>(fp.dim));
}

providers::ProviderFingerprint read_fingerprint(Reader& r) {
    providers::ProviderFingerprint fp;
    fp.endpoint = r.str();
    fp.model = r.str();
    fp.dim = r.u32();
    return fp;
}

EmbeddingVector read_vector(Reader& r, std::size_t dim, const char* what) {
    if (dim == 0)
        r.corrupt(std::string("zero dimension for ") + what);
    std::vector<float> values = r.floats(dim);
    const bool normalized = r.u8() != 0;
    try {
        return EmbeddingVector(std::move(values), normalized);
    } catch (const Error& e) {
        r.corrupt(std::string("invalid ") + what + " vector: " + e.what());
    }
}

json sidecar_metadata(const CodebaseIndex& index) {
    json fingerprints;
    for (const auto& [schema, fp] : index.fingerprints) {
        fingerprints[std::string(schema_key(schema))] = {
            {"endpoint", fp.endpoint}, {"model", fp.model}, {"dim", fp.dim}};
    }
    std::size_t fallback_comments = 0;
    for (const auto& e : index.entries) {
        if (e.comment.fallback)
            ++fallback_comments;
    }
    return json{{"format_version", kFormatVersion},
                {"codebase_id", index.codebase_id},
                {"created_at_ms", index.created_at_ms},
                {"entry_count", index.entries.size()},
                {"fallback_comments", fallback_comments},
                {"fingerprints", fingerprints}};
}

} // namespace

bool same_content(const CodebaseIndex& a, const CodebaseIndex& b) {
    if (a.codebase_id != b.codebase_id || a.fingerprints != b.fingerprints ||
        a.entries.size() != b.entries.size())
        return false;
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        const IndexEntry& x = a.entries[i];
        const IndexEntry& y = b.entries[i];
        if (x.snippet.id != y.snippet.id || x.snippet.source != y.snippet.source ||
            x.snippet.language != y.snippet.language || x.comment != y.comment ||
            x.code_vec_qc != y.code_vec_qc || x.code_vec_cc != y.code_vec_cc ||
            x.comment_vec != y.comment_vec)
            return false;
    }
    return true;
}

void save_index(const CodebaseIndex& index, const fs::path& path) {
    if (index.fingerprints.size() != 3)
        throw ParameterError("index must carry one fingerprint per schema");

    Writer w(path);
    w.raw(kMagic, 4);
    w.u32(kFormatVersion);
    w.str(index.codebase_id);
    w.i64(index.created_at_ms);
    for (Schema s : kAllSchemas)
        write_fingerprint(w, index.fingerprints.at(s));
    w.u64(index.entries.size());

    for (const auto& e : index.entries) {
        w.str(e.snippet.id);
        w.str(e.snippet.source);
        w.str(e.snippet.language);
        w.str(e.comment.text);
        w.str(e.comment.generator);
        w.u8(static_cast<std::uint8_t>((e.comment.truncated ? 1 : 0) |
                                       (e.comment.fallback ? 2 : 0)));
        w.u32(static_cast<std::uint32_t>(e.code_vec_qc.dim()));
        w.floats(e.code_vec_qc.values());
        w.u8(e.code_vec_qc.normalized() ? 1 : 0);
        w.u32(static_cast<std::uint32_t>(e.code_vec_cc.dim()));
        w.floats(e.code_vec_cc.values());
        w.u8(e.code_vec_cc.normalized() ? 1 : 0);
        w.u32(static_cast<std::uint32_t>(e.comment_vec.dim()));
        w.floats(e.comment_vec.values());
        w.u8(e.comment_vec.normalized() ? 1 : 0);
    }

    fs::path sidecar = path;
    sidecar += ".meta.json";
    std::ofstream meta(sidecar, std::ios::trunc);
    if (!meta)
        throw DataError("cannot write sidecar " + sidecar.string());
    meta << sidecar_metadata(index).dump(2) << "\n";
}

CodebaseIndex load_index(const fs::path& path, const std::optional<FingerprintMap>& expected) {
    Reader r(path);

    char magic[4];
    r.raw(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0)
        r.corrupt("bad magic");
    const std::uint32_t version = r.u32();
    if (version != kFormatVersion)
        r.corrupt("unsupported format version " + std::to_string(version));

    CodebaseIndex index;
    index.codebase_id = r.str();
    index.created_at_ms = r.i64();
    for (Schema s : kAllSchemas)
        index.fingerprints[s] = read_fingerprint(r);

    const std::uint64_t count = r.u64();
    index.entries.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        IndexEntry e;
        e.snippet.id = r.str();
        e.snippet.source = r.str();
        e.snippet.language = r.str();
        e.comment.text = r.str();
        e.comment.generator = r.str();
        const std::uint8_t flags = r.u8();
        e.comment.truncated = (flags & 1) != 0;
        e.comment.fallback = (flags & 2) != 0;
        e.code_vec_qc = read_vector(r, r.u32(), "query-code");
        e.code_vec_cc = read_vector(r, r.u32(), "code-code");
        e.comment_vec = read_vector(r, r.u32(), "comment");
        index.entries.push_back(std::move(e));
    }
    if (!r.at_eof())
        r.corrupt("trailing bytes after last record");

    // Stored vectors must agree with the header fingerprints.
    for (const auto& e : index.entries) {
        if (e.code_vec_qc.dim() != index.fingerprints.at(Schema::query_code).dim ||
            e.code_vec_cc.dim() != index.fingerprints.at(Schema::code_code).dim ||
            e.comment_vec.dim() != index.fingerprints.at(Schema::query_comment).dim)
            throw IndexCorrupt(path.string() + ": vector dims disagree with header fingerprints",
                               r.offset());
    }

    if (expected)
        ensure_compatible(index, *expected);
    return index;
}

void ensure_compatible(const CodebaseIndex& index, const FingerprintMap& configured) {
    for (Schema s : kAllSchemas) {
        auto it = configured.find(s);
        if (it == configured.end())
            throw IndexIncompatible("no configured provider for schema " +
                                    std::string(schema_key(s)));
        const auto& want = it->second;
        const auto& have = index.fingerprints.at(s);
        if (want.endpoint != have.endpoint || want.model != have.model)
            throw IndexIncompatible(
                "index was built with " + std::string(schema_key(s)) + " provider (" +
                have.endpoint + ", " + have.model + ") but the configuration names (" +
                want.endpoint + ", " + want.model + "); rebuild the index or fix the config");
        if (want.dim != 0 && have.dim != 0 && want.dim != have.dim)
            throw IndexIncompatible("index " + std::string(schema_key(s)) + " dimension " +
                                    std::to_string(have.dim) + " does not match configured " +
                                    std::to_string(want.dim));
    }
}

} // namespace trisearch::indexer
