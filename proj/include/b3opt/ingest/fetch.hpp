#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "b3opt/core/date.hpp"
#include "b3opt/ingest/url.hpp"

namespace b3opt::ingest {

// status == 0 means the request never completed (connect/transport failure).
struct HttpResponse {
    int status = 0;
    std::string body;
};

using Transport = std::function<HttpResponse(const std::string& url)>;

// Persists one validated archive payload; an IoError here aborts the batch.
using StoreFn = std::function<void(Date, const std::string& payload)>;

enum class FetchStatus { success, http_failure, invalid_payload, skipped_weekend };

const char* to_string(FetchStatus s);

struct DateStatus {
    Date date;
    FetchStatus status;
    int attempts = 0;
};

struct FetchManifest {
    Date from, to;
    int concurrency = 0;
    std::vector<DateStatus> statuses;  // ascending by date, one entry per date in range
    size_t count(FetchStatus s) const;
};

struct FetchOptions {
    int concurrency = 30;
    std::string base_url{kDefaultBaseUrl};
    std::chrono::milliseconds retry_delay{500};  // one retry per failed date
};

// Downloads PEyymmdd.ex_ for every date in [from, to]. Weekends are skipped
// without a request; failures are recorded per date and never abort the batch.
FetchManifest fetch_archives(Date from, Date to, const FetchOptions& options,
                             const Transport& transport, const StoreFn& store);

// Real HTTP client (cpp-httplib). Accepts absolute http:// and https:// URLs.
Transport make_http_transport();

}  // namespace b3opt::ingest
