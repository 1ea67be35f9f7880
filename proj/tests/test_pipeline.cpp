#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "twinfuse/pipeline.hpp"
#include "twinfuse/errors.hpp"
#include "twinfuse/store.hpp"
#include "test_helpers.hpp"

using namespace twinfuse;

namespace {

// Desk-scale setup: 3 pairs, 24x16 ears, 4x3 bank.
PipelineConfig mini_config(const std::filesystem::path& root) {
    PipelineConfig cfg;
    cfg.manifest = root / "cohort" / "manifest.txt";
    cfg.store = root / "store";
    cfg.report_dir = root / "reports";
    cfg.seed = 7;
    cfg.ear.image_width = 24;
    cfg.ear.image_height = 16;
    cfg.ear.bank.n_orientations = 4;
    cfg.ear.bank.n_scales = 3;
    cfg.ear.bank.max_kernel_size = 15;
    return cfg;
}

int run_cli(const std::string& args) {
    const char* bin = std::getenv("TWINFUSE_BIN");
    REQUIRE(bin != nullptr);
    const int status = std::system((std::string(bin) + " " + args).c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_SUITE("pipeline") {

TEST_CASE("library-level end to end on a mini cohort") {
    testutil::TempDir root("pipe");
    auto cfg = mini_config(root.path());
    std::ostringstream log;

    run_synth(cfg, 3, log);
    run_extract(cfg, "speech", log);
    run_extract(cfg, "ear", log);

    // one entry per training/test item
    for (const char* subject : {"twin000_a", "twin002_b"}) {
        CHECK(exists(cfg.store, StoreKind::mfcc, std::string(subject) + ".train0"));
        CHECK(exists(cfg.store, StoreKind::mfcc, std::string(subject) + ".train1"));
        CHECK(exists(cfg.store, StoreKind::mfcc, std::string(subject) + ".test"));
        CHECK(exists(cfg.store, StoreKind::ear_vector, std::string(subject) + ".train"));
        CHECK(exists(cfg.store, StoreKind::ear_vector, std::string(subject) + ".probe"));
    }

    run_match(cfg, log);
    const auto speech = matrix_from_entry(get(cfg.store, StoreKind::score_matrix, "speech"));
    const auto ear = matrix_from_entry(get(cfg.store, StoreKind::score_matrix, "ear"));
    CHECK(speech.rows() == 6);
    CHECK(speech.cols() == 6);
    CHECK(ear.rows() == 6);
    CHECK(speech.allFinite());
    CHECK(ear.allFinite());
    CHECK(ear.minCoeff() >= 0.0);
    // dcva model persisted: d x (C-1) projection plus per-class common vectors
    const auto projection = matrix_from_entry(get(cfg.store, StoreKind::dcva_model, "projection"));
    CHECK(projection.cols() == 5);
    const auto common = matrix_from_entry(get(cfg.store, StoreKind::dcva_model, "common_vectors"));
    CHECK(common.rows() == 5);
    CHECK(common.cols() == 6);

    const auto report = run_evaluate(cfg, log);
    CHECK(report.speech.rates.size() == 6);
    CHECK(report.speech.rates[5] == doctest::Approx(1.0));
    CHECK(report.ear.rates[5] == doctest::Approx(1.0));
    CHECK(report.fused.rates[5] == doctest::Approx(1.0));
    for (const auto& row : report.table.rows)
        for (int k = 1; k < 5; ++k) CHECK(row.percent[k] >= row.percent[k - 1]);

    for (const char* name :
         {"cmc_speech.csv", "cmc_ear.csv", "cmc_fused.csv", "rank_table.csv", "rank_table.txt"})
        CHECK(std::filesystem::exists(cfg.report_dir / name));

    SUBCASE("rerunning match and evaluate is idempotent") {
        const auto table_before = testutil::read_file(cfg.report_dir / "rank_table.txt");
        const auto speech_before = testutil::read_file(cfg.store / "score_matrix/speech.feat");
        std::ostringstream log2;
        run_match(cfg, log2);
        run_evaluate(cfg, log2);
        CHECK(testutil::read_file(cfg.report_dir / "rank_table.txt") == table_before);
        CHECK(testutil::read_file(cfg.store / "score_matrix/speech.feat") == speech_before);
    }

    SUBCASE("the printed table ends up in the log") {
        CHECK(log.str().find("BIOMETRIC SYSTEM") != std::string::npos);
        CHECK(log.str().find("only twins one-one") != std::string::npos);
    }
}

TEST_CASE("match without features lists the absent ids") {
    testutil::TempDir root("pipe");
    auto cfg = mini_config(root.path());
    std::ostringstream log;
    run_synth(cfg, 1, log);
    try {
        run_match(cfg, log);
        FAIL("expected NotFound");
    } catch (const NotFound& e) {
        const std::string msg = e.what();
        CHECK(msg.find("twin000_a.train0") != std::string::npos);
        CHECK(msg.find("extract") != std::string::npos);
    }
}

TEST_CASE("evaluate without matrices fails cleanly") {
    testutil::TempDir root("pipe");
    auto cfg = mini_config(root.path());
    std::ostringstream log;
    run_synth(cfg, 1, log);
    CHECK_THROWS_AS(run_evaluate(cfg, log), NotFound);
}

TEST_CASE("extract rejects unknown modalities") {
    testutil::TempDir root("pipe");
    auto cfg = mini_config(root.path());
    std::ostringstream log;
    run_synth(cfg, 1, log);
    CHECK_THROWS_AS(run_extract(cfg, "iris", log), ConfigError);
}

TEST_CASE("cli exit codes and flag handling") {
    testutil::TempDir root("cli");
    const auto conf_path = root.path() / "run.conf";
    {
        std::ofstream conf(conf_path);
        conf << "manifest=" << (root.path() / "cohort" / "manifest.txt").string() << "\n"
             << "store=" << (root.path() / "store").string() << "\n"
             << "report_dir=" << (root.path() / "reports").string() << "\n"
             << "ear.width=24\near.height=16\n"
             << "ear.orientations=4\near.scales=3\near.max_kernel=15\n";
    }
    const std::string with_conf = " --config " + conf_path.string();
    const std::string quiet = " > /dev/null 2>&1";

    CHECK(run_cli("--help" + quiet) == 0);
    CHECK(run_cli("synth --help" + quiet) == 0);
    CHECK(run_cli("bogus-subcommand" + quiet) == 2);
    CHECK(run_cli("synth --pairs 1 --unknown-flag" + with_conf + quiet) == 2);
    CHECK(run_cli("synth --pairs 0" + with_conf + quiet) == 2);
    CHECK(run_cli("synth" + with_conf + quiet) == 2);  // --pairs is required
    CHECK(run_cli("extract --modality iris" + with_conf + quiet) == 2);
    CHECK(run_cli("evaluate --config /nonexistent.conf" + quiet) == 2);

    CHECK(run_cli("synth --pairs 2" + with_conf + quiet) == 0);
    CHECK(run_cli("extract --modality speech" + with_conf + quiet) == 0);
    CHECK(run_cli("extract --modality ear" + with_conf + quiet) == 0);
    CHECK(run_cli("match" + with_conf + quiet) == 0);
    CHECK(run_cli("evaluate" + with_conf + quiet) == 0);
    CHECK(std::filesystem::exists(root.path() / "reports" / "rank_table.txt"));

    SUBCASE("runtime failures exit 1 and name the offending path") {
        std::filesystem::remove(root.path() / "cohort/audio/twin000_a_test.wav");
        const auto err_file = root.path() / "err.txt";
        const int code = run_cli("extract --modality speech" + with_conf + " 2> " +
                                 err_file.string() + " > /dev/null");
        CHECK(code == 1);
        CHECK(testutil::read_file(err_file).find("twin000_a_test.wav") != std::string::npos);
    }
}

}
