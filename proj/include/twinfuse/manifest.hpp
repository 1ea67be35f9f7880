#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace twinfuse {

/// One enrolled subject: two training utterances, one test utterance,
/// a left-ear training image and a right-ear test image.
struct SubjectRecord {
    std::string subject_id;
    std::string twin_id;
    std::vector<std::filesystem::path> speech_train;
    std::filesystem::path speech_test;
    std::filesystem::path ear_train;
    std::filesystem::path ear_test;
};

struct Manifest {
    std::string cohort_name;
    std::vector<SubjectRecord> subjects;

    const SubjectRecord* find(const std::string& subject_id) const;
};

/// Parses a cohort manifest. One record per line:
///   subject_id,twin_id,speech_train_1;speech_train_2,speech_test,ear_train,ear_test
/// Lines starting with '#' are comments. Relative media paths are resolved
/// against the manifest's directory and must exist. Twin links are checked
/// for symmetry.
/// Throws ParseError (with line number), DanglingTwin, DuplicateSubject.
Manifest parse_manifest(const std::filesystem::path& path);

/// Writes a manifest in the format parse_manifest reads; media paths are
/// stored relative to the manifest's directory when possible.
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

} // namespace twinfuse
