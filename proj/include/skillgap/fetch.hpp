#ifndef SKILLGAP_FETCH_HPP
#define SKILLGAP_FETCH_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "skillgap/record.hpp"

namespace skillgap {

// A page could not be fetched or did not yield a usable record. Carries the
// URL so batch diagnostics stay actionable.
struct FetchError : DataError {
    using DataError::DataError;
};

// One source portal: where to query and how to pull fields out of its
// pages. Selector syntax is documented in html.hpp; the map must cover
// doc_id, title and body, and may add link (discovery), country, language
// and level.
struct PortalConfig {
    std::string name;
    Side side = Side::demand;
    std::string query_url_template;  // {keyword} placeholder
    std::map<std::string, std::string> selectors;
    double politeness_delay = 3.0;  // seconds between requests to this portal
    int max_retries = 2;
};

// Throws DataError when required selectors are missing or malformed.
void validate_portal(const PortalConfig& config);

// Where pages come from. Live HTTP and local fixture directories implement
// the same interface, so everything downstream of discovery is testable
// offline.
class PageSource {
  public:
    virtual ~PageSource() = default;
    virtual std::string get(const std::string& url) = 0;  // page bytes; FetchError on failure
};

class FileSource : public PageSource {
  public:
    explicit FileSource(std::string base_dir);
    std::string get(const std::string& url) override;  // url is a path, file:// allowed

  private:
    std::string base_dir_;
};

class HttpSource : public PageSource {
  public:
    explicit HttpSource(int timeout_seconds = 30);
    std::string get(const std::string& url) override;

  private:
    int timeout_seconds_;
};

// Serializes requests to one portal: each wait() returns only after the
// configured gap has passed since the previous return. Clock and sleeper
// are injectable so tests measure the schedule instead of sleeping.
class RateLimiter {
  public:
    using Clock = std::function<double()>;          // seconds, monotonic
    using Sleeper = std::function<void(double)>;    // sleep for seconds
    RateLimiter(double min_gap_seconds, Clock clock = {}, Sleeper sleeper = {});
    void wait();

  private:
    double min_gap_;
    Clock clock_;
    Sleeper sleeper_;
    double last_ = -1.0;
    bool first_ = true;
};

struct DiscoverResult {
    std::vector<std::string> urls;  // deduplicated, discovery order
    std::vector<Diagnostic> diagnostics;
};

// Queries the portal once per keyword and collects result links. Failures
// are retried up to config.max_retries, then recorded; the batch never
// aborts. Empty keyword list → empty result.
DiscoverResult discover(const PortalConfig& config, const std::vector<std::string>& keywords,
                        PageSource& source, RateLimiter& limiter);

// Fixture-mode discovery: every result*.html in the directory is treated as
// one query result page.
DiscoverResult discover_fixture_dir(const PortalConfig& config, const std::string& dir);

// Applies the portal's selectors to one page. doc_id, title and body are
// required; body markup is flattened to plain text and normalized. Throws
// FetchError naming the URL when a required field has no match.
DocumentRecord extract(const std::string& page_bytes, const PortalConfig& config,
                       const std::string& url);

struct FetchResult {
    Corpus corpus;
    std::vector<Diagnostic> diagnostics;
};

// Fetches and extracts every URL, one request per politeness window;
// per-URL failures become diagnostics. retrieved_at is stamped on success.
FetchResult fetch_records(const PortalConfig& config, const std::vector<std::string>& urls,
                          PageSource& source, RateLimiter& limiter,
                          const std::string& retrieved_at);

// Current time as RFC 3339 UTC, e.g. "2024-05-01T12:00:00Z".
std::string now_rfc3339();

}  // namespace skillgap

#endif
