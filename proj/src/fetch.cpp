#define CPPHTTPLIB_NO_EXCEPTIONS
#include "skillgap/fetch.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "skillgap/html.hpp"
#include "skillgap/text.hpp"

namespace skillgap {

namespace {

const char* kRequiredFields[] = {"doc_id", "title", "body"};

std::string collapse_ws(const std::string& s) {
    std::string out;
    bool pending = false;
    for (char c : s) {
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
            pending = !out.empty();
        } else {
            if (pending) out += ' ';
            pending = false;
            out += c;
        }
    }
    return out;
}

std::string percent_encode(const std::string& s) {
    std::string out;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out += static_cast<char>(c);
        } else {
            char buffer[4];
            std::snprintf(buffer, sizeof(buffer), "%%%02X", c);
            out += buffer;
        }
    }
    return out;
}

std::string substitute_keyword(const std::string& url_template, const std::string& keyword) {
    const std::string placeholder = "{keyword}";
    const std::size_t pos = url_template.find(placeholder);
    if (pos == std::string::npos) {
        throw DataError("query URL template has no {keyword} placeholder: " + url_template);
    }
    return url_template.substr(0, pos) + percent_encode(keyword) +
           url_template.substr(pos + placeholder.size());
}

std::string fetch_with_retries(PageSource& source, const std::string& url, int max_retries,
                               RateLimiter& limiter) {
    std::string last_error;
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        limiter.wait();  // retries honour the politeness gap too
        try {
            return source.get(url);
        } catch (const FetchError& e) {
            last_error = e.what();
        }
    }
    throw FetchError(last_error + " (after " + std::to_string(1 + max_retries) + " attempts)");
}

// First selector match for a named field, or empty when the portal does not
// configure that field.
std::vector<std::string> field_values(const HtmlNode& root, const PortalConfig& config,
                                      const std::string& field) {
    const auto it = config.selectors.find(field);
    if (it == config.selectors.end()) return {};
    return select_values(root, parse_selector(it->second));
}

}  // namespace

void validate_portal(const PortalConfig& config) {
    if (config.name.empty()) throw DataError("portal has no name");
    if (config.politeness_delay < 0.0) {
        throw DataError("portal '" + config.name + "': politeness_delay must be >= 0");
    }
    if (config.max_retries < 0) {
        throw DataError("portal '" + config.name + "': max_retries must be >= 0");
    }
    for (const char* field : kRequiredFields) {
        if (config.selectors.count(field) == 0) {
            throw DataError("portal '" + config.name + "': missing selector '" + field + "'");
        }
    }
    for (const auto& [field, expression] : config.selectors) {
        try {
            parse_selector(expression);
        } catch (const DataError& e) {
            throw DataError("portal '" + config.name + "', selector '" + field + "': " + e.what());
        }
    }
}

FileSource::FileSource(std::string base_dir) : base_dir_(std::move(base_dir)) {}

std::string FileSource::get(const std::string& url) {
    std::string path = url;
    if (path.rfind("file://", 0) == 0) path = path.substr(7);
    std::filesystem::path resolved(path);
    if (resolved.is_relative() && !base_dir_.empty()) {
        resolved = std::filesystem::path(base_dir_) / resolved;
    }
    std::ifstream in(resolved, std::ios::binary);
    if (!in) throw FetchError("cannot read page file: " + resolved.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

HttpSource::HttpSource(int timeout_seconds) : timeout_seconds_(timeout_seconds) {}

std::string HttpSource::get(const std::string& url) {
    if (url.rfind("http://", 0) != 0) {
        throw FetchError("unsupported URL scheme (only http:// is built in): " + url);
    }
    const std::size_t host_start = 7;
    const std::size_t path_start = url.find('/', host_start);
    const std::string host_port =
        path_start == std::string::npos ? url.substr(host_start)
                                        : url.substr(host_start, path_start - host_start);
    const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
    if (host_port.empty()) throw FetchError("URL has no host: " + url);
    httplib::Client client("http://" + host_port);
    client.set_connection_timeout(timeout_seconds_, 0);
    client.set_read_timeout(timeout_seconds_, 0);
    auto response = client.Get(path);
    if (!response) throw FetchError("request failed: " + url);
    if (response->status != 200) {
        throw FetchError("HTTP " + std::to_string(response->status) + ": " + url);
    }
    return response->body;
}

RateLimiter::RateLimiter(double min_gap_seconds, Clock clock, Sleeper sleeper)
    : min_gap_(min_gap_seconds), clock_(std::move(clock)), sleeper_(std::move(sleeper)) {
    if (min_gap_ < 0.0) throw DataError("politeness delay must be >= 0");
    if (!clock_) {
        clock_ = []() {
            return std::chrono::duration<double>(
                       std::chrono::steady_clock::now().time_since_epoch())
                .count();
        };
    }
    if (!sleeper_) {
        sleeper_ = [](double seconds) {
            std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
        };
    }
}

void RateLimiter::wait() {
    if (first_) {  // the first request goes out immediately
        first_ = false;
        last_ = clock_();
        return;
    }
    const double elapsed = clock_() - last_;
    if (elapsed < min_gap_) sleeper_(min_gap_ - elapsed);
    last_ = clock_();
}

DiscoverResult discover(const PortalConfig& config, const std::vector<std::string>& keywords,
                        PageSource& source, RateLimiter& limiter) {
    validate_portal(config);
    DiscoverResult result;
    if (keywords.empty()) return result;
    if (config.selectors.count("link") == 0) {
        throw DataError("portal '" + config.name + "': discovery needs a 'link' selector");
    }
    const Selector link_selector = parse_selector(config.selectors.at("link"));
    std::set<std::string> seen;
    for (const std::string& keyword : keywords) {
        const std::string url = substitute_keyword(config.query_url_template, keyword);
        std::string page;
        try {
            page = fetch_with_retries(source, url, config.max_retries, limiter);
        } catch (const FetchError& e) {
            result.diagnostics.push_back({"discover", "query failed; keyword skipped",
                                          keyword + ": " + e.what(), -1});
            continue;
        }
        const auto tree = parse_html(utf8_sanitize(page));
        for (const std::string& link : select_values(*tree, link_selector)) {
            if (!link.empty() && seen.insert(link).second) result.urls.push_back(link);
        }
    }
    return result;
}

DiscoverResult discover_fixture_dir(const PortalConfig& config, const std::string& dir) {
    validate_portal(config);
    if (config.selectors.count("link") == 0) {
        throw DataError("portal '" + config.name + "': discovery needs a 'link' selector");
    }
    if (!std::filesystem::is_directory(dir)) {
        throw DataError("fixture directory does not exist: " + dir);
    }
    const Selector link_selector = parse_selector(config.selectors.at("link"));
    std::vector<std::string> pages;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("result", 0) == 0 && name.size() > 5 &&
            name.compare(name.size() - 5, 5, ".html") == 0) {
            pages.push_back(entry.path().string());
        }
    }
    std::sort(pages.begin(), pages.end());
    DiscoverResult result;
    FileSource source("");
    std::set<std::string> seen;
    for (const std::string& page_path : pages) {
        std::string page;
        try {
            page = source.get(page_path);
        } catch (const FetchError& e) {
            result.diagnostics.push_back({"discover", "unreadable result page", e.what(), -1});
            continue;
        }
        const auto tree = parse_html(utf8_sanitize(page));
        for (const std::string& link : select_values(*tree, link_selector)) {
            if (!link.empty() && seen.insert(link).second) result.urls.push_back(link);
        }
    }
    return result;
}

DocumentRecord extract(const std::string& page_bytes, const PortalConfig& config,
                       const std::string& url) {
    const auto tree = parse_html(utf8_sanitize(page_bytes));
    DocumentRecord record;
    record.source_id = config.name;
    record.side = config.side;

    const auto first_of = [&](const std::string& field) -> std::string {
        const std::vector<std::string> values = field_values(*tree, config, field);
        return values.empty() ? std::string() : values.front();
    };

    record.doc_id = collapse_ws(first_of("doc_id"));
    record.title = collapse_ws(first_of("title"));
    record.body = normalize(first_of("body"));
    if (record.doc_id.empty()) throw FetchError("no doc_id on page: " + url);
    if (record.title.empty()) throw FetchError("no title on page: " + url);
    if (record.body.empty()) throw FetchError("no body text on page: " + url);

    record.country = collapse_ws(first_of("country"));
    const std::string language = normalize(first_of("language"));
    if (!language.empty()) record.language = language;
    const std::string level = normalize(first_of("level"));
    if (!level.empty()) {
        try {
            record.level = level_from_string(level);
        } catch (const DataError&) {
            throw FetchError("unrecognized level '" + level + "' on page: " + url);
        }
    }
    record.content_hash = content_hash(record.body);
    return record;
}

FetchResult fetch_records(const PortalConfig& config, const std::vector<std::string>& urls,
                          PageSource& source, RateLimiter& limiter,
                          const std::string& retrieved_at) {
    validate_portal(config);
    FetchResult result;
    result.corpus.side = config.side;
    result.corpus.provenance = config.name;
    for (const std::string& url : urls) {
        try {
            const std::string page = fetch_with_retries(source, url, config.max_retries, limiter);
            DocumentRecord record = extract(page, config, url);
            record.retrieved_at = retrieved_at;
            result.corpus.records.push_back(std::move(record));
        } catch (const FetchError& e) {
            result.diagnostics.push_back({"fetch", "page skipped", e.what(), -1});
        }
    }
    return result;
}

std::string now_rfc3339() {
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buffer[80];
    std::snprintf(buffer, sizeof(buffer), "%04d-%02d-%02dT%02d:%02d:%02dZ", utc.tm_year + 1900,
                  utc.tm_mon + 1, utc.tm_mday, utc.tm_hour, utc.tm_min, utc.tm_sec);
    return buffer;
}

}  // namespace skillgap
