#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace twinfuse {

enum class StoreKind : std::uint8_t {
    mfcc = 1,
    ear_vector = 2,
    dcva_model = 3,
    score_matrix = 4,
};

std::string kind_dir(StoreKind kind);

/// One persisted array: `<kind>/<id>.feat` holding the 8-byte magic
/// "TWFUSE01", the kind byte, the shape arity, the shape dims as u64 LE and
/// a little-endian f64 payload (row-major for matrices).
struct StoreEntry {
    StoreKind kind = StoreKind::mfcc;
    std::string id;
    std::vector<std::uint64_t> shape;
    Eigen::VectorXd payload;
};

StoreEntry entry_from_matrix(StoreKind kind, const std::string& id,
                             const Eigen::Ref<const Eigen::MatrixXd>& m);
StoreEntry entry_from_vector(StoreKind kind, const std::string& id,
                             const Eigen::Ref<const Eigen::VectorXd>& v);
Eigen::MatrixXd matrix_from_entry(const StoreEntry& e);

/// Atomic write (temp file + rename); readers never observe partial files.
/// Throws IoError.
void put(const std::filesystem::path& store_dir, const StoreEntry& entry);

/// Throws NotFound when the entry is absent, CorruptEntry on bad magic,
/// bad arity, or shape/payload mismatch.
StoreEntry get(const std::filesystem::path& store_dir, StoreKind kind, const std::string& id);

bool exists(const std::filesystem::path& store_dir, StoreKind kind, const std::string& id);

} // namespace twinfuse
