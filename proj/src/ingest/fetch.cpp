#include "b3opt/ingest/fetch.hpp"

#include <httplib.h>

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "b3opt/core/errors.hpp"

namespace b3opt::ingest {

const char* to_string(FetchStatus s) {
    switch (s) {
        case FetchStatus::success: return "success";
        case FetchStatus::http_failure: return "http-failure";
        case FetchStatus::invalid_payload: return "invalid-payload";
        case FetchStatus::skipped_weekend: return "skipped-weekend";
    }
    return "unknown";
}

size_t FetchManifest::count(FetchStatus s) const {
    size_t n = 0;
    for (const auto& ds : statuses)
        if (ds.status == s) ++n;
    return n;
}

namespace {

bool looks_like_archive(const std::string& body) {
    return body.size() >= 4 && body[0] == 'P' && body[1] == 'K';
}

}  // namespace

FetchManifest fetch_archives(Date from, Date to, const FetchOptions& options,
                             const Transport& transport, const StoreFn& store) {
    if (to < from) throw InputError("fetch range end precedes start");
    if (options.concurrency < 1) throw InputError("concurrency must be >= 1");

    std::vector<Date> dates;
    for (Date d = from; d <= to; d = d.add_days(1)) dates.push_back(d);

    FetchManifest manifest;
    manifest.from = from;
    manifest.to = to;
    manifest.concurrency = options.concurrency;
    manifest.statuses.resize(dates.size());

    std::atomic<size_t> next{0};
    std::atomic<bool> abort{false};
    std::exception_ptr store_error;
    std::mutex store_mutex;

    auto worker = [&] {
        while (!abort.load()) {
            size_t i = next.fetch_add(1);
            if (i >= dates.size()) return;
            Date date = dates[i];
            DateStatus& slot = manifest.statuses[i];
            slot.date = date;

            if (date.is_weekend()) {
                slot.status = FetchStatus::skipped_weekend;
                continue;
            }

            std::string url = build_download_url(date, options.base_url);
            FetchStatus status = FetchStatus::http_failure;
            for (int attempt = 1; attempt <= 2; ++attempt) {
                slot.attempts = attempt;
                HttpResponse resp = transport(url);
                if (resp.status != 200 || resp.body.empty()) {
                    status = FetchStatus::http_failure;
                } else if (!looks_like_archive(resp.body)) {
                    status = FetchStatus::invalid_payload;
                } else {
                    try {
                        store(date, resp.body);
                    } catch (...) {
                        std::lock_guard lock(store_mutex);
                        if (!store_error) store_error = std::current_exception();
                        abort.store(true);
                        return;
                    }
                    status = FetchStatus::success;
                    break;
                }
                if (attempt == 1) std::this_thread::sleep_for(options.retry_delay);
            }
            slot.status = status;
        }
    };

    size_t n_workers = std::min<size_t>(options.concurrency, dates.size());
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    if (store_error) std::rethrow_exception(store_error);
    return manifest;
}

Transport make_http_transport() {
    return [](const std::string& url) -> HttpResponse {
        size_t scheme_end = url.find("://");
        if (scheme_end == std::string::npos) return {};
        size_t path_start = url.find('/', scheme_end + 3);
        std::string origin = path_start == std::string::npos ? url : url.substr(0, path_start);
        std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

        httplib::Client client(origin);
        client.set_connection_timeout(15, 0);
        client.set_read_timeout(60, 0);
        client.set_follow_location(true);

        auto res = client.Get(path);
        if (!res) return {};
        return {res->status, res->body};
    };
}

}  // namespace b3opt::ingest
