#include "twinfuse/pipeline.hpp"

#include <fstream>
#include <ostream>

#include "twinfuse/audio.hpp"
#include "twinfuse/dcva.hpp"
#include "twinfuse/dtw.hpp"
#include "twinfuse/errors.hpp"
#include "twinfuse/image.hpp"
#include "twinfuse/parallel.hpp"
#include "twinfuse/store.hpp"
#include "twinfuse/synth.hpp"

namespace twinfuse {

namespace {

std::string mfcc_id(const std::string& subject, int train_idx) {
    return subject + ".train" + std::to_string(train_idx);
}

GaborBankConfig bank_config(const PipelineConfig& cfg) {
    GaborBankConfig bank = cfg.ear.bank;
    const int img_cap = std::min(cfg.ear.image_width, cfg.ear.image_height);
    bank.max_kernel_size = std::min(bank.max_kernel_size, img_cap);
    return bank;
}

MfccSequence load_mfcc(const PipelineConfig& cfg, const std::string& id) {
    MfccSequence seq;
    seq.frames = matrix_from_entry(get(cfg.store, StoreKind::mfcc, id));
    seq.config = cfg.speech;
    return seq;
}

void require_entries(const PipelineConfig& cfg, StoreKind kind,
                     const std::vector<std::string>& ids) {
    std::string missing;
    for (const auto& id : ids)
        if (!exists(cfg.store, kind, id)) missing += (missing.empty() ? "" : ", ") + id;
    if (!missing.empty())
        throw NotFound("missing " + kind_dir(kind) + " entries: " + missing +
                       " (run `twinfuse extract` first)");
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::trunc);
        if (!os) throw IoError("cannot open " + tmp + " for writing");
        os << text;
        if (!os) throw IoError("short write to " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp + ": " + ec.message());
}

} // namespace

void run_synth(const PipelineConfig& cfg, int n_pairs, std::ostream& log) {
    if (cfg.manifest.filename() != "manifest.txt")
        throw ConfigError("synth writes <dir>/manifest.txt; point `manifest` at a manifest.txt");
    SynthConfig synth;
    synth.seed = cfg.seed;
    synth.n_pairs = n_pairs;
    synth.twin_gap = cfg.twin_gap;
    synth.sample_rate = cfg.sample_rate;
    synth.image_width = cfg.ear.image_width;
    synth.image_height = cfg.ear.image_height;

    const auto out_dir =
        cfg.manifest.has_parent_path() ? cfg.manifest.parent_path() : std::filesystem::path(".");
    const Manifest manifest = generate_synthetic_cohort(synth, out_dir);
    log << "wrote " << manifest.subjects.size() << " subjects under " << out_dir.string()
        << "\nmanifest: " << cfg.manifest.string() << "\n";
}

void run_extract(const PipelineConfig& cfg, const std::string& modality, std::ostream& log) {
    const Manifest manifest = parse_manifest(cfg.manifest);
    const auto n = manifest.subjects.size();

    if (modality == "speech") {
        parallel_for(n, [&](std::size_t i) {
            const auto& rec = manifest.subjects[i];
            try {
                for (std::size_t u = 0; u < rec.speech_train.size(); ++u) {
                    const auto seq = mfcc(load_wav(rec.speech_train[u]), cfg.speech);
                    put(cfg.store, entry_from_matrix(StoreKind::mfcc,
                                                     mfcc_id(rec.subject_id, static_cast<int>(u)),
                                                     seq.frames));
                }
                const auto seq = mfcc(load_wav(rec.speech_test), cfg.speech);
                put(cfg.store, entry_from_matrix(StoreKind::mfcc, rec.subject_id + ".test",
                                                 seq.frames));
            } catch (const Error& e) {
                throw Error("subject " + rec.subject_id + ": " + e.what());
            }
        });
        log << "extracted mfcc features: " << n * 3 << " entries (" << n << " subjects x 3)\n";
    } else if (modality == "ear") {
        const GaborBank bank = build_gabor_bank(bank_config(cfg));
        parallel_for(n, [&](std::size_t i) {
            const auto& rec = manifest.subjects[i];
            try {
                const auto train = extract_ear_features(load_image(rec.ear_train), bank,
                                                        cfg.ear.mirror, cfg.ear.downsample);
                put(cfg.store, entry_from_vector(StoreKind::ear_vector, rec.subject_id + ".train",
                                                 train.values));
                const auto probe = extract_ear_features(load_image(rec.ear_test), bank,
                                                        /*mirror=*/false, cfg.ear.downsample);
                put(cfg.store, entry_from_vector(StoreKind::ear_vector, rec.subject_id + ".probe",
                                                 probe.values));
            } catch (const Error& e) {
                throw Error("subject " + rec.subject_id + ": " + e.what());
            }
        });
        log << "extracted ear features: " << n * 2 << " vectors (" << n << " subjects x 2)\n";
    } else {
        throw ConfigError("unknown modality '" + modality + "', expected speech or ear");
    }
}

void run_match(const PipelineConfig& cfg, std::ostream& log) {
    const Manifest manifest = parse_manifest(cfg.manifest);
    const auto n = manifest.subjects.size();
    if (n == 0) throw InvalidArgument("empty manifest");
    const auto count = static_cast<Eigen::Index>(n);

    // -- speech ------------------------------------------------------------
    {
        std::vector<std::string> ids;
        for (const auto& rec : manifest.subjects) {
            for (std::size_t u = 0; u < rec.speech_train.size(); ++u)
                ids.push_back(mfcc_id(rec.subject_id, static_cast<int>(u)));
            ids.push_back(rec.subject_id + ".test");
        }
        require_entries(cfg, StoreKind::mfcc, ids);

        std::vector<SpeechTemplate> gallery(n);
        std::vector<MfccSequence> probes(n);
        parallel_for(n, [&](std::size_t i) {
            const auto& rec = manifest.subjects[i];
            gallery[i].subject_id = rec.subject_id;
            for (std::size_t u = 0; u < rec.speech_train.size(); ++u)
                gallery[i].sequences.push_back(
                    load_mfcc(cfg, mfcc_id(rec.subject_id, static_cast<int>(u))));
            probes[i] = load_mfcc(cfg, rec.subject_id + ".test");
        });

        Eigen::MatrixXd distances(count, count);
        parallel_for(n, [&](std::size_t p) {
            const auto row = match_speech(probes[p], gallery, cfg.dtw);
            for (std::size_t g = 0; g < n; ++g)
                distances(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(g)) =
                    row[g].second;
        });
        put(cfg.store, entry_from_matrix(StoreKind::score_matrix, "speech", distances));
        log << "speech distance matrix: " << n << " x " << n << "\n";
    }

    // -- ear -----------------------------------------------------------------
    {
        std::vector<std::string> ids;
        for (const auto& rec : manifest.subjects) {
            ids.push_back(rec.subject_id + ".train");
            ids.push_back(rec.subject_id + ".probe");
        }
        require_entries(cfg, StoreKind::ear_vector, ids);

        LabeledSamples training;
        for (const auto& rec : manifest.subjects) {
            const auto entry = get(cfg.store, StoreKind::ear_vector, rec.subject_id + ".train");
            training.labels.push_back(rec.subject_id);
            training.samples.push_back(entry.payload);
        }
        const DcvaModel model = fit_dcva(training);
        put(cfg.store, entry_from_matrix(StoreKind::dcva_model, "projection", model.projection));
        put(cfg.store,
            entry_from_matrix(StoreKind::dcva_model, "common_vectors", model.common_vectors));
        std::string labels;
        for (const auto& label : model.class_labels) labels += label + "\n";
        write_text_atomic(cfg.store / kind_dir(StoreKind::dcva_model) / "labels.txt", labels);

        Eigen::MatrixXd distances(count, count);
        parallel_for(n, [&](std::size_t p) {
            EarFeatureVector probe;
            probe.subject_id = manifest.subjects[p].subject_id;
            probe.values =
                get(cfg.store, StoreKind::ear_vector, probe.subject_id + ".probe").payload;
            const auto row = match_ear(probe, model);
            for (std::size_t g = 0; g < n; ++g)
                distances(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(g)) =
                    row[g].second;
        });
        put(cfg.store, entry_from_matrix(StoreKind::score_matrix, "ear", distances));
        log << "ear distance matrix: " << n << " x " << n << " (dcva dim "
            << model.reduced_dim() << ")\n";
    }
}

EvalReport run_evaluate(const PipelineConfig& cfg, std::ostream& log) {
    const Manifest manifest = parse_manifest(cfg.manifest);
    std::vector<std::string> subject_ids;
    for (const auto& rec : manifest.subjects) subject_ids.push_back(rec.subject_id);

    auto load_scores = [&](const std::string& system) {
        ScoreMatrix m;
        m.probe_ids = subject_ids;
        m.gallery_ids = subject_ids;
        m.scores = matrix_from_entry(get(cfg.store, StoreKind::score_matrix, system));
        m.polarity = Polarity::distance;
        if (m.scores.rows() != static_cast<Eigen::Index>(subject_ids.size()) ||
            m.scores.cols() != static_cast<Eigen::Index>(subject_ids.size()))
            throw IdMismatch("stored " + system + " matrix does not match the manifest size");
        return m;
    };

    const ScoreMatrix speech_sim = to_similarity(load_scores("speech"), cfg.fusion.scope);
    const ScoreMatrix ear_sim = to_similarity(load_scores("ear"), cfg.fusion.scope);
    const ScoreMatrix fused_sim =
        fuse(speech_sim, ear_sim, cfg.fusion.w_speech, cfg.fusion.w_ear);

    IdentityMap truth, twins;
    for (const auto& rec : manifest.subjects) {
        truth[rec.subject_id] = rec.subject_id;
        twins[rec.subject_id] = rec.twin_id;
    }

    EvalReport report;
    report.speech = cmc(speech_sim, truth);
    report.ear = cmc(ear_sim, truth);
    report.fused = cmc(fused_sim, truth);
    report.table = rank_table(report.speech, report.ear, report.fused);
    report.one_one_percent = {100.0 * twin_one_one(speech_sim, truth, twins),
                              100.0 * twin_one_one(ear_sim, truth, twins),
                              100.0 * twin_one_one(fused_sim, truth, twins)};

    std::error_code ec;
    std::filesystem::create_directories(cfg.report_dir, ec);
    if (ec) throw IoError("cannot create " + cfg.report_dir.string() + ": " + ec.message());
    write_cmc_csv(cfg.report_dir / "cmc_speech.csv", "speech", report.speech);
    write_cmc_csv(cfg.report_dir / "cmc_ear.csv", "ear", report.ear);
    write_cmc_csv(cfg.report_dir / "cmc_fused.csv", "fused", report.fused);
    write_rank_table_csv(cfg.report_dir / "rank_table.csv", report.table,
                         report.one_one_percent);
    const std::string table = format_rank_table(report.table, report.one_one_percent);
    write_text_atomic(cfg.report_dir / "rank_table.txt", table);
    log << table;
    return report;
}

} // namespace twinfuse
