#include "twinfuse/config.hpp"

#include <fstream>
#include <sstream>

#include "twinfuse/errors.hpp"

namespace twinfuse {

namespace {

int to_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected integer, got '" + value + "'");
    }
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected number, got '" + value + "'");
    }
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError(key + ": expected true/false, got '" + value + "'");
}

std::vector<int> to_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_int(key, item));
    if (out.empty()) throw ConfigError(key + ": expected a comma-separated list");
    return out;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace

void set_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "manifest") cfg.manifest = value;
    else if (key == "store") cfg.store = value;
    else if (key == "report_dir") cfg.report_dir = value;
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
    else if (key == "twin_gap") cfg.twin_gap = to_double(key, value);
    else if (key == "sample_rate") cfg.sample_rate = to_int(key, value);
    else if (key == "speech.frame_ms") cfg.speech.frame_ms = to_double(key, value);
    else if (key == "speech.step_ms") cfg.speech.step_ms = to_double(key, value);
    else if (key == "speech.n_fft") cfg.speech.n_fft = to_int(key, value);
    else if (key == "speech.n_filters") cfg.speech.n_filters = to_int(key, value);
    else if (key == "speech.f_lo") cfg.speech.f_lo = to_double(key, value);
    else if (key == "speech.f_hi") cfg.speech.f_hi = to_double(key, value);
    else if (key == "speech.n_ceps") cfg.speech.n_ceps = to_int(key, value);
    else if (key == "dtw.coeffs") cfg.dtw.coeff_subset = to_int_list(key, value);
    else if (key == "dtw.equalize") cfg.dtw.equalize = to_bool(key, value);
    else if (key == "ear.orientations") cfg.ear.bank.n_orientations = to_int(key, value);
    else if (key == "ear.scales") cfg.ear.bank.n_scales = to_int(key, value);
    else if (key == "ear.f_max") cfg.ear.bank.f_max = to_double(key, value);
    else if (key == "ear.sigma_factor") cfg.ear.bank.sigma_factor = to_double(key, value);
    else if (key == "ear.gamma") cfg.ear.bank.gamma = to_double(key, value);
    else if (key == "ear.eta") cfg.ear.bank.eta = to_double(key, value);
    else if (key == "ear.psi") cfg.ear.bank.psi = to_double(key, value);
    else if (key == "ear.max_kernel") cfg.ear.bank.max_kernel_size = to_int(key, value);
    else if (key == "ear.downsample") cfg.ear.downsample = to_int(key, value);
    else if (key == "ear.mirror") cfg.ear.mirror = to_bool(key, value);
    else if (key == "ear.width") cfg.ear.image_width = to_int(key, value);
    else if (key == "ear.height") cfg.ear.image_height = to_int(key, value);
    else if (key == "fusion.w_speech") cfg.fusion.w_speech = to_double(key, value);
    else if (key == "fusion.w_ear") cfg.fusion.w_ear = to_double(key, value);
    else if (key == "fusion.normalization") {
        if (value == "row") cfg.fusion.scope = NormScope::per_row;
        else if (value == "global") cfg.fusion.scope = NormScope::global;
        else throw ConfigError(key + ": expected 'row' or 'global', got '" + value + "'");
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());

    PipelineConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = trim(line);
        if (body.empty() || body[0] == '#') continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + " line " + std::to_string(line_no) +
                              ": expected key=value");
        try {
            set_config_value(cfg, trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(path.string() + " line " + std::to_string(line_no) + ": " +
                              e.what());
        }
    }
    return cfg;
}

} // namespace twinfuse
