#include "skillgap/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace skillgap {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_line(int line_no, const std::string& message) {
    throw DataError("config line " + std::to_string(line_no) + ": " + message);
}

int to_int(const std::string& value, int line_no) {
    try {
        std::size_t used = 0;
        const int parsed = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        bad_line(line_no, "expected an integer, got '" + value + "'");
    }
}

double to_double(const std::string& value, int line_no) {
    char* end = nullptr;
    const double parsed = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size()) {
        bad_line(line_no, "expected a number, got '" + value + "'");
    }
    return parsed;
}

std::uint64_t to_u64(const std::string& value, int line_no) {
    try {
        std::size_t used = 0;
        const unsigned long long parsed = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        bad_line(line_no, "expected an unsigned integer, got '" + value + "'");
    }
}

// Numbers in dumps: integral values print without a decimal point; the
// C locale is never changed, so '.' is the separator everywhere.
std::string fmt_number(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%g", value);
    return buffer;
}

void apply_global(AppConfig& config, const std::string& key, const std::string& value,
                  int line_no) {
    if (key == "threshold") {
        config.threshold = to_int(value, line_no);
        if (config.threshold < 0 || config.threshold > 100) {
            bad_line(line_no, "threshold must be in [0, 100]");
        }
    } else if (key == "min_body_count") {
        config.min_body_count = to_int(value, line_no);
        if (config.min_body_count < 1) bad_line(line_no, "min_body_count must be >= 1");
    } else if (key.rfind("keyword.", 0) == 0) {
        const std::string language = key.substr(8);
        if (language.empty()) bad_line(line_no, "keyword needs a language: keyword.<lang>");
        if (value.empty()) bad_line(line_no, "keyword must not be empty");
        config.keywords[language] = value;
    } else if (key == "k_min") {
        config.k_min = to_int(value, line_no);
        if (config.k_min < 2) bad_line(line_no, "k_min must be >= 2");
    } else if (key == "k_max") {
        config.k_max = to_int(value, line_no);
    } else if (key == "k_step") {
        config.k_step = to_int(value, line_no);
        if (config.k_step < 1) bad_line(line_no, "k_step must be >= 1");
    } else if (key == "top_words") {
        config.top_words = to_int(value, line_no);
        if (config.top_words < 1) bad_line(line_no, "top_words must be >= 1");
    } else if (key == "npmi_top_n") {
        config.npmi_top_n = to_int(value, line_no);
        if (config.npmi_top_n < 2) bad_line(line_no, "npmi_top_n must be >= 2");
    } else if (key == "iterations") {
        config.iterations = to_int(value, line_no);
        if (config.iterations < 1) bad_line(line_no, "iterations must be >= 1");
    } else if (key == "alpha") {
        config.alpha = value == "auto" ? 0.0 : to_double(value, line_no);
    } else if (key == "beta") {
        config.beta = to_double(value, line_no);
        if (config.beta <= 0.0) bad_line(line_no, "beta must be positive");
    } else if (key == "seed") {
        config.seed = to_u64(value, line_no);
    } else if (key == "vocab_min_df") {
        config.vocab_min_df = to_int(value, line_no);
        if (config.vocab_min_df < 1) bad_line(line_no, "vocab_min_df must be >= 1");
    } else if (key == "vocab_max_df") {
        config.vocab_max_df = to_double(value, line_no);
        if (config.vocab_max_df <= 0.0 || config.vocab_max_df > 1.0) {
            bad_line(line_no, "vocab_max_df must be in (0, 1]");
        }
    } else if (key == "infer_iterations") {
        config.infer_iterations = to_int(value, line_no);
        if (config.infer_iterations < 1) bad_line(line_no, "infer_iterations must be >= 1");
    } else if (key == "theta_threshold") {
        config.theta_threshold = to_double(value, line_no);
        if (config.theta_threshold <= 0.0 || config.theta_threshold > 1.0) {
            bad_line(line_no, "theta_threshold must be in (0, 1]");
        }
    } else if (key == "topic_df_mode") {
        if (value != "dominant" && value != "threshold") {
            bad_line(line_no, "topic_df_mode must be 'dominant' or 'threshold'");
        }
        config.topic_df_mode = value;
    } else if (key == "translate_target") {
        if (value.empty()) bad_line(line_no, "translate_target must not be empty");
        config.translate_target = value;
    } else if (key == "translate_provider") {
        if (value.empty()) bad_line(line_no, "translate_provider must not be empty");
        config.translate_provider = value;
    } else {
        bad_line(line_no, "unknown key '" + key + "'");
    }
}

void apply_portal(PortalConfig& portal, const std::string& key, const std::string& value,
                  int line_no) {
    if (key == "side") {
        try {
            portal.side = side_from_string(value);
        } catch (const DataError& e) {
            bad_line(line_no, e.what());
        }
    } else if (key == "query_url_template") {
        portal.query_url_template = value;
    } else if (key == "politeness_delay") {
        portal.politeness_delay = to_double(value, line_no);
        if (portal.politeness_delay < 0.0) bad_line(line_no, "politeness_delay must be >= 0");
    } else if (key == "max_retries") {
        portal.max_retries = to_int(value, line_no);
        if (portal.max_retries < 0) bad_line(line_no, "max_retries must be >= 0");
    } else if (key.rfind("selector.", 0) == 0) {
        const std::string field = key.substr(9);
        if (field.empty()) bad_line(line_no, "selector needs a field: selector.<field>");
        if (value.empty()) bad_line(line_no, "selector must not be empty");
        portal.selectors[field] = value;
    } else {
        bad_line(line_no, "unknown portal key '" + key + "'");
    }
}

}  // namespace

const PortalConfig& AppConfig::portal(const std::string& name) const {
    for (const PortalConfig& p : portals) {
        if (p.name == name) return p;
    }
    throw DataError("no portal named '" + name + "' in the configuration");
}

AppConfig parse_config(std::istream& in) {
    AppConfig config;
    std::string line;
    int line_no = 0;
    PortalConfig* current_portal = nullptr;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        if (stripped.front() == '[') {
            if (stripped.back() != ']') bad_line(line_no, "unterminated section header");
            const std::string section = trim(stripped.substr(1, stripped.size() - 2));
            if (section.rfind("portal ", 0) != 0) {
                bad_line(line_no, "only [portal <name>] sections are supported");
            }
            const std::string name = trim(section.substr(7));
            if (name.empty()) bad_line(line_no, "portal section has no name");
            for (const PortalConfig& p : config.portals) {
                if (p.name == name) bad_line(line_no, "duplicate portal '" + name + "'");
            }
            config.portals.emplace_back();
            config.portals.back().name = name;
            current_portal = &config.portals.back();
            continue;
        }
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) bad_line(line_no, "expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) bad_line(line_no, "empty key");
        if (current_portal != nullptr) {
            apply_portal(*current_portal, key, value, line_no);
        } else {
            apply_global(config, key, value, line_no);
        }
    }
    if (config.k_max < config.k_min) {
        throw DataError("config: k_max (" + std::to_string(config.k_max) +
                        ") is below k_min (" + std::to_string(config.k_min) + ")");
    }
    for (const PortalConfig& portal : config.portals) validate_portal(portal);
    return config;
}

AppConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open config file: " + path);
    try {
        return parse_config(in);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

void dump_config(const AppConfig& config, std::ostream& out) {
    out << "threshold = " << config.threshold << "\n";
    out << "min_body_count = " << config.min_body_count << "\n";
    for (const auto& [language, keyword] : config.keywords) {
        out << "keyword." << language << " = " << keyword << "\n";
    }
    out << "k_min = " << config.k_min << "\n";
    out << "k_max = " << config.k_max << "\n";
    out << "k_step = " << config.k_step << "\n";
    out << "top_words = " << config.top_words << "\n";
    out << "npmi_top_n = " << config.npmi_top_n << "\n";
    out << "iterations = " << config.iterations << "\n";
    out << "alpha = " << (config.alpha <= 0.0 ? "auto" : fmt_number(config.alpha)) << "\n";
    out << "beta = " << fmt_number(config.beta) << "\n";
    out << "seed = " << config.seed << "\n";
    out << "vocab_min_df = " << config.vocab_min_df << "\n";
    out << "vocab_max_df = " << fmt_number(config.vocab_max_df) << "\n";
    out << "infer_iterations = " << config.infer_iterations << "\n";
    out << "theta_threshold = " << fmt_number(config.theta_threshold) << "\n";
    out << "topic_df_mode = " << config.topic_df_mode << "\n";
    out << "translate_target = " << config.translate_target << "\n";
    out << "translate_provider = " << config.translate_provider << "\n";
    for (const PortalConfig& portal : config.portals) {
        out << "\n[portal " << portal.name << "]\n";
        out << "side = " << to_string(portal.side) << "\n";
        if (!portal.query_url_template.empty()) {
            out << "query_url_template = " << portal.query_url_template << "\n";
        }
        out << "politeness_delay = " << fmt_number(portal.politeness_delay) << "\n";
        out << "max_retries = " << portal.max_retries << "\n";
        for (const auto& [field, expression] : portal.selectors) {
            out << "selector." << field << " = " << expression << "\n";
        }
    }
}

}  // namespace skillgap
