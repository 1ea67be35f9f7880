#include "twinfuse/manifest.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "twinfuse/errors.hpp"

namespace twinfuse {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(trim(item));
    if (!s.empty() && s.back() == sep) parts.push_back("");
    return parts;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p,
                              int line_no) {
    if (p.empty()) throw ParseError("manifest line " + std::to_string(line_no) + ": empty path");
    std::filesystem::path full = std::filesystem::path(p).is_absolute() ? p : base / p;
    if (!std::filesystem::exists(full))
        throw ParseError("manifest line " + std::to_string(line_no) + ": missing file " +
                         full.string());
    return full;
}

} // namespace

const SubjectRecord* Manifest::find(const std::string& subject_id) const {
    for (const auto& s : subjects)
        if (s.subject_id == subject_id) return &s;
    return nullptr;
}

Manifest parse_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");

    Manifest manifest;
    manifest.cohort_name = path.stem().string();

    std::unordered_map<std::string, std::size_t> index;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = trim(line);
        if (body.empty() || body[0] == '#') continue;

        const auto fields = split(body, ',');
        if (fields.size() != 6)
            throw ParseError("manifest line " + std::to_string(line_no) + ": expected 6 fields, got " +
                             std::to_string(fields.size()));

        SubjectRecord rec;
        rec.subject_id = fields[0];
        rec.twin_id = fields[1];
        if (rec.subject_id.empty() || rec.twin_id.empty())
            throw ParseError("manifest line " + std::to_string(line_no) + ": empty id");
        if (rec.twin_id == rec.subject_id)
            throw ParseError("manifest line " + std::to_string(line_no) + ": subject " +
                             rec.subject_id + " is its own twin");
        if (index.count(rec.subject_id))
            throw DuplicateSubject("duplicate subject id " + rec.subject_id + " at line " +
                                   std::to_string(line_no));

        for (const auto& p : split(fields[2], ';'))
            rec.speech_train.push_back(resolve(base, p, line_no));
        if (rec.speech_train.empty())
            throw ParseError("manifest line " + std::to_string(line_no) + ": no training utterances");
        rec.speech_test = resolve(base, fields[3], line_no);
        rec.ear_train = resolve(base, fields[4], line_no);
        rec.ear_test = resolve(base, fields[5], line_no);

        index.emplace(rec.subject_id, manifest.subjects.size());
        manifest.subjects.push_back(std::move(rec));
    }

    for (const auto& rec : manifest.subjects) {
        const auto it = index.find(rec.twin_id);
        if (it == index.end())
            throw DanglingTwin("subject " + rec.subject_id + " references unknown twin " +
                               rec.twin_id);
        const auto& twin = manifest.subjects[it->second];
        if (twin.twin_id != rec.subject_id)
            throw DanglingTwin("twin relation not symmetric: " + rec.subject_id + " -> " +
                               rec.twin_id + " but " + twin.subject_id + " -> " + twin.twin_id);
    }
    return manifest;
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");

    auto rel = [&base](const std::filesystem::path& p) {
        const auto r = p.lexically_relative(base);
        return (r.empty() || r.native().starts_with("..")) ? p.generic_string()
                                                           : r.generic_string();
    };

    os << "# subject_id,twin_id,speech_train_1;speech_train_2,speech_test,ear_train,ear_test\n";
    for (const auto& rec : manifest.subjects) {
        os << rec.subject_id << "," << rec.twin_id << ",";
        for (std::size_t i = 0; i < rec.speech_train.size(); ++i)
            os << (i ? ";" : "") << rel(rec.speech_train[i]);
        os << "," << rel(rec.speech_test) << "," << rel(rec.ear_train) << ","
           << rel(rec.ear_test) << "\n";
    }
    if (!os) throw IoError("short write to " + path.string());
}

} // namespace twinfuse
