#include "twinfuse/store.hpp"

#include <fstream>

#include "twinfuse/errors.hpp"
#include "bytes.hpp"

namespace twinfuse {

namespace {

constexpr char kMagic[8] = {'T', 'W', 'F', 'U', 'S', 'E', '0', '1'};
constexpr std::size_t kHeaderFixed = 10;  // magic + kind byte + arity byte

int expected_arity(StoreKind kind) {
    switch (kind) {
        case StoreKind::mfcc: return 2;
        case StoreKind::ear_vector: return 1;
        case StoreKind::dcva_model: return 2;
        case StoreKind::score_matrix: return 2;
    }
    throw InvalidArgument("unknown store kind");
}

void check_id(const std::string& id) {
    if (id.empty() || id == "." || id == ".." ||
        id.find_first_of("/\\\0") != std::string::npos)
        throw InvalidArgument("store id '" + id + "' is not a valid file name");
}

std::filesystem::path entry_path(const std::filesystem::path& store_dir, StoreKind kind,
                                 const std::string& id) {
    return store_dir / kind_dir(kind) / (id + ".feat");
}

} // namespace

std::string kind_dir(StoreKind kind) {
    switch (kind) {
        case StoreKind::mfcc: return "mfcc";
        case StoreKind::ear_vector: return "ear_vector";
        case StoreKind::dcva_model: return "dcva_model";
        case StoreKind::score_matrix: return "score_matrix";
    }
    throw InvalidArgument("unknown store kind");
}

StoreEntry entry_from_matrix(StoreKind kind, const std::string& id,
                             const Eigen::Ref<const Eigen::MatrixXd>& m) {
    StoreEntry e;
    e.kind = kind;
    e.id = id;
    e.shape = {static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())};
    e.payload.resize(m.size());
    for (Eigen::Index r = 0; r < m.rows(); ++r)  // row-major payload
        e.payload.segment(r * m.cols(), m.cols()) = m.row(r);
    return e;
}

StoreEntry entry_from_vector(StoreKind kind, const std::string& id,
                             const Eigen::Ref<const Eigen::VectorXd>& v) {
    StoreEntry e;
    e.kind = kind;
    e.id = id;
    e.shape = {static_cast<std::uint64_t>(v.size())};
    e.payload = v;
    return e;
}

Eigen::MatrixXd matrix_from_entry(const StoreEntry& e) {
    if (e.shape.size() != 2) throw CorruptEntry("entry " + e.id + " is not a matrix");
    const auto rows = static_cast<Eigen::Index>(e.shape[0]);
    const auto cols = static_cast<Eigen::Index>(e.shape[1]);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) m.row(r) = e.payload.segment(r * cols, cols);
    return m;
}

void put(const std::filesystem::path& store_dir, const StoreEntry& entry) {
    check_id(entry.id);
    if (entry.shape.size() != static_cast<std::size_t>(expected_arity(entry.kind)))
        throw InvalidArgument("kind " + kind_dir(entry.kind) + " requires arity " +
                              std::to_string(expected_arity(entry.kind)));
    std::uint64_t count = 1;
    for (auto dim : entry.shape) count *= dim;
    if (count != static_cast<std::uint64_t>(entry.payload.size()))
        throw InvalidArgument("payload length does not match the shape product");

    const auto path = entry_path(store_dir, entry.kind, entry.id);
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());

    std::vector<std::uint8_t> buf;
    buf.reserve(kHeaderFixed + 8 * entry.shape.size() + 8 * entry.payload.size());
    buf.insert(buf.end(), kMagic, kMagic + 8);
    buf.push_back(static_cast<std::uint8_t>(entry.kind));
    buf.push_back(static_cast<std::uint8_t>(entry.shape.size()));
    for (auto dim : entry.shape) bytes::put_u64(buf, dim);
    for (Eigen::Index i = 0; i < entry.payload.size(); ++i) bytes::put_f64(buf, entry.payload[i]);

    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("cannot open " + tmp + " for writing");
        os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (!os) throw IoError("short write to " + tmp);
    }
    std::filesystem::rename(tmp, path, ec);  // atomic publish
    if (ec) throw IoError("cannot rename " + tmp + ": " + ec.message());
}

StoreEntry get(const std::filesystem::path& store_dir, StoreKind kind, const std::string& id) {
    check_id(id);
    const auto path = entry_path(store_dir, kind, id);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFound("no " + kind_dir(kind) + " entry '" + id + "' in " +
                            store_dir.string());
    std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());

    if (buf.size() < kHeaderFixed || std::memcmp(buf.data(), kMagic, 8) != 0)
        throw CorruptEntry(path.string() + ": bad magic");
    if (buf[8] != static_cast<std::uint8_t>(kind))
        throw CorruptEntry(path.string() + ": kind byte disagrees with its directory");
    const std::size_t arity = buf[9];
    if (arity != static_cast<std::size_t>(expected_arity(kind)))
        throw CorruptEntry(path.string() + ": unexpected shape arity " + std::to_string(arity));
    if (buf.size() < kHeaderFixed + 8 * arity)
        throw CorruptEntry(path.string() + ": truncated shape header");

    StoreEntry entry;
    entry.kind = kind;
    entry.id = id;
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < arity; ++i) {
        entry.shape.push_back(bytes::get_u64(&buf[kHeaderFixed + 8 * i]));
        count *= entry.shape.back();
    }
    const std::size_t payload_off = kHeaderFixed + 8 * arity;
    if (buf.size() != payload_off + 8 * count)
        throw CorruptEntry(path.string() + ": payload size disagrees with the declared shape");

    entry.payload.resize(static_cast<Eigen::Index>(count));
    for (std::uint64_t i = 0; i < count; ++i)
        entry.payload[static_cast<Eigen::Index>(i)] = bytes::get_f64(&buf[payload_off + 8 * i]);
    return entry;
}

bool exists(const std::filesystem::path& store_dir, StoreKind kind, const std::string& id) {
    check_id(id);
    return std::filesystem::exists(entry_path(store_dir, kind, id));
}

} // namespace twinfuse
