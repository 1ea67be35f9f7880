#include <doctest.h>

#include <fstream>

#include "twinfuse/manifest.hpp"
#include "twinfuse/errors.hpp"
#include "test_helpers.hpp"

using namespace twinfuse;

namespace {

// Creates the referenced media stubs and the manifest text.
struct Cohort {
    testutil::TempDir dir{"manifest"};

    void touch(const std::string& rel) {
        const auto p = dir.path() / rel;
        std::filesystem::create_directories(p.parent_path());
        std::ofstream(p) << "x";
    }

    std::filesystem::path write(const std::string& text) {
        const auto p = dir.path() / "manifest.txt";
        std::ofstream(p) << text;
        return p;
    }

    std::string line(const std::string& id, const std::string& twin) {
        for (const auto& suffix :
             {"_1.wav", "_2.wav", "_t.wav", "_l.ppm", "_r.ppm"})
            touch("media/" + id + suffix);
        return id + "," + twin + ",media/" + id + "_1.wav;media/" + id + "_2.wav,media/" + id +
               "_t.wav,media/" + id + "_l.ppm,media/" + id + "_r.ppm\n";
    }
};

} // namespace

TEST_SUITE("manifest") {

TEST_CASE("parses a symmetric two-subject cohort") {
    Cohort c;
    const auto path = c.write("# comment\n" + c.line("A", "B") + c.line("B", "A"));
    const auto manifest = parse_manifest(path);
    REQUIRE(manifest.subjects.size() == 2);
    CHECK(manifest.cohort_name == "manifest");
    CHECK(manifest.subjects[0].subject_id == "A");
    CHECK(manifest.subjects[0].twin_id == "B");
    CHECK(manifest.subjects[0].speech_train.size() == 2);
    CHECK(std::filesystem::exists(manifest.subjects[0].ear_train));
    CHECK(manifest.find("B") != nullptr);
    CHECK(manifest.find("zz") == nullptr);
}

TEST_CASE("missing twin is dangling") {
    Cohort c;
    const auto path = c.write(c.line("A", "B"));
    CHECK_THROWS_AS(parse_manifest(path), DanglingTwin);
}

TEST_CASE("asymmetric twin links are dangling") {
    Cohort c;
    const auto path = c.write(c.line("A", "B") + c.line("B", "C") + c.line("C", "B"));
    CHECK_THROWS_AS(parse_manifest(path), DanglingTwin);
}

TEST_CASE("duplicate subjects are rejected") {
    Cohort c;
    const auto path = c.write(c.line("A", "B") + c.line("B", "A") + c.line("A", "B"));
    CHECK_THROWS_AS(parse_manifest(path), DuplicateSubject);
}

TEST_CASE("parse errors carry the line number") {
    Cohort c;
    const auto path = c.write(c.line("A", "B") + "only,three,fields\n");
    try {
        parse_manifest(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("self-twins are rejected") {
    Cohort c;
    const auto path = c.write(c.line("A", "A"));
    CHECK_THROWS_AS(parse_manifest(path), ParseError);
}

TEST_CASE("unresolvable media paths are rejected") {
    Cohort c;
    auto text = c.line("A", "B") + c.line("B", "A");
    std::filesystem::remove(c.dir.path() / "media/B_r.ppm");
    const auto path = c.write(text);
    try {
        parse_manifest(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("B_r.ppm") != std::string::npos);
    }
}

TEST_CASE("write/parse round trip preserves the records") {
    Cohort c;
    const auto path = c.write(c.line("A", "B") + c.line("B", "A"));
    const auto manifest = parse_manifest(path);

    const auto copy_path = c.dir.path() / "copy.txt";
    write_manifest(copy_path, manifest);
    const auto copy = parse_manifest(copy_path);
    REQUIRE(copy.subjects.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(copy.subjects[i].subject_id == manifest.subjects[i].subject_id);
        CHECK(copy.subjects[i].twin_id == manifest.subjects[i].twin_id);
        CHECK(copy.subjects[i].speech_train == manifest.subjects[i].speech_train);
        CHECK(copy.subjects[i].ear_test == manifest.subjects[i].ear_test);
    }
}

}
