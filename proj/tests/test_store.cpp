#include <doctest.h>

#include <cstring>
#include <random>

#include "twinfuse/store.hpp"
#include "twinfuse/errors.hpp"
#include "test_helpers.hpp"

using namespace twinfuse;

TEST_SUITE("store") {

TEST_CASE("put/get round trip is bit-exact") {
    testutil::TempDir dir("store");
    std::mt19937_64 rng(71);
    const Eigen::MatrixXd m = testutil::random_matrix(rng, 7, 5);
    put(dir.path(), entry_from_matrix(StoreKind::mfcc, "subj.train0", m));

    const auto back = get(dir.path(), StoreKind::mfcc, "subj.train0");
    REQUIRE(back.shape == std::vector<std::uint64_t>{7, 5});
    const Eigen::MatrixXd mm = matrix_from_entry(back);
    REQUIRE(mm.rows() == 7);
    CHECK(std::memcmp(mm.data(), m.data(), sizeof(double) * 35) == 0);

    SUBCASE("vector entries too") {
        const Eigen::VectorXd v = testutil::random_vector(rng, 64);
        put(dir.path(), entry_from_vector(StoreKind::ear_vector, "subj.probe", v));
        const auto e = get(dir.path(), StoreKind::ear_vector, "subj.probe");
        CHECK(e.payload == v);
    }
}

TEST_CASE("second write wins") {
    testutil::TempDir dir("store");
    const Eigen::MatrixXd a = Eigen::MatrixXd::Constant(2, 2, 1.0);
    const Eigen::MatrixXd b = Eigen::MatrixXd::Constant(2, 2, 2.0);
    put(dir.path(), entry_from_matrix(StoreKind::score_matrix, "speech", a));
    put(dir.path(), entry_from_matrix(StoreKind::score_matrix, "speech", b));
    CHECK(matrix_from_entry(get(dir.path(), StoreKind::score_matrix, "speech")) == b);
}

TEST_CASE("missing entries are NotFound") {
    testutil::TempDir dir("store");
    CHECK_FALSE(exists(dir.path(), StoreKind::mfcc, "nope"));
    CHECK_THROWS_AS(get(dir.path(), StoreKind::mfcc, "nope"), NotFound);
}

TEST_CASE("corruption is always detected") {
    testutil::TempDir dir("store");
    std::mt19937_64 rng(72);
    put(dir.path(), entry_from_vector(StoreKind::ear_vector, "v", testutil::random_vector(rng, 16)));
    const auto path = dir.path() / "ear_vector" / "v.feat";

    SUBCASE("truncation mid-payload") {
        auto data = testutil::read_file(path);
        data.resize(data.size() - 5);
        std::vector<unsigned char> bytes(data.begin(), data.end());
        testutil::write_bytes(path, bytes);
        CHECK_THROWS_AS(get(dir.path(), StoreKind::ear_vector, "v"), CorruptEntry);
    }

    SUBCASE("bad magic") {
        auto data = testutil::read_file(path);
        data[0] = 'X';
        std::vector<unsigned char> bytes(data.begin(), data.end());
        testutil::write_bytes(path, bytes);
        CHECK_THROWS_AS(get(dir.path(), StoreKind::ear_vector, "v"), CorruptEntry);
    }

    SUBCASE("kind byte from another directory") {
        auto data = testutil::read_file(path);
        data[8] = static_cast<char>(StoreKind::mfcc);
        std::vector<unsigned char> bytes(data.begin(), data.end());
        testutil::write_bytes(path, bytes);
        CHECK_THROWS_AS(get(dir.path(), StoreKind::ear_vector, "v"), CorruptEntry);
    }

    SUBCASE("trailing garbage") {
        auto data = testutil::read_file(path);
        data += "extra";
        std::vector<unsigned char> bytes(data.begin(), data.end());
        testutil::write_bytes(path, bytes);
        CHECK_THROWS_AS(get(dir.path(), StoreKind::ear_vector, "v"), CorruptEntry);
    }
}

TEST_CASE("unwritable store directory is IoError") {
    testutil::TempDir dir("store");
    // a regular file where a directory is needed blocks create_directories
    testutil::write_bytes(dir.path() / "blocked", {'x'});
    const auto store_dir = dir.path() / "blocked" / "store";
    CHECK_THROWS_AS(
        put(store_dir, entry_from_vector(StoreKind::ear_vector, "v", Eigen::VectorXd::Zero(2))),
        IoError);
}

TEST_CASE("ids must be plain file names") {
    testutil::TempDir dir("store");
    CHECK_THROWS_AS(put(dir.path(), entry_from_vector(StoreKind::ear_vector, "../escape",
                                                      Eigen::VectorXd::Zero(2))),
                    InvalidArgument);
    CHECK_THROWS_AS(get(dir.path(), StoreKind::ear_vector, ""), InvalidArgument);
}

TEST_CASE("shape arity is enforced per kind") {
    testutil::TempDir dir("store");
    StoreEntry e;
    e.kind = StoreKind::mfcc;  // matrices need arity 2
    e.id = "bad";
    e.shape = {4};
    e.payload = Eigen::VectorXd::Zero(4);
    CHECK_THROWS_AS(put(dir.path(), e), InvalidArgument);
}

}
