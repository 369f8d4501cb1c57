#ifndef SKILLGAP_CONFIG_HPP
#define SKILLGAP_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "skillgap/fetch.hpp"

namespace skillgap {

// Every tunable in one place, with the pinned defaults: threshold 90
// (strict ">"), relevance rule "keyword in title OR >= 3 body occurrences",
// topic sweep 5..50, 30 words shown per topic for annotation.
struct AppConfig {
    int threshold = 90;          // token-set score must exceed this
    int min_body_count = 3;      // relevance: body occurrences when title misses
    std::map<std::string, std::string> keywords = {{"en", "security"},
                                                   {"de", "sicherheit"}};
    int k_min = 5;
    int k_max = 50;
    int k_step = 1;
    int top_words = 30;          // words listed per topic for human labeling
    int npmi_top_n = 10;         // words per topic entering coherence
    int iterations = 500;        // Gibbs sweeps
    double alpha = 0.0;          // <= 0 means "auto" (50/K)
    double beta = 0.01;
    std::uint64_t seed = 42;
    int vocab_min_df = 2;
    double vocab_max_df = 0.95;
    int infer_iterations = 50;   // fold-in sweeps per unseen document
    double theta_threshold = 0.2;
    std::string topic_df_mode = "dominant";  // or "threshold"
    std::string translate_target = "en";
    std::string translate_provider = "identity";
    std::vector<PortalConfig> portals;

    const PortalConfig& portal(const std::string& name) const;  // DataError when unknown
};

// `key = value` lines, `#` comments, `[portal <name>]` sections whose keys
// are side, query_url_template, politeness_delay, max_retries and
// selector.<field>. Unknown keys are errors: a typo must not silently fall
// back to a default.
AppConfig parse_config(std::istream& in);
AppConfig parse_config_file(const std::string& path);

// Effective configuration in the same format parse_config reads;
// deterministic key order, so two dumps of one config are byte-identical.
void dump_config(const AppConfig& config, std::ostream& out);

}  // namespace skillgap

#endif
