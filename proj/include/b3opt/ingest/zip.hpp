#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "b3opt/core/date.hpp"
#include "b3opt/core/errors.hpp"

namespace b3opt::ingest {

struct ZipEntry {
    std::string name;  // path as stored in the archive
    std::string content;
};

// Carries the trading date of the archive that failed to extract.
struct ExtractError : InputError {
    ExtractError(Date date, const std::string& what)
        : InputError(date.to_iso() + ": " + what), date(date) {}
    Date date;
};

// Reads a ZIP container (stored and deflate entries; CRC-checked).
// Directory entries are skipped. Throws InputError on malformed input.
std::vector<ZipEntry> zip_extract(std::string_view payload);

// Spec'd .ex_ handling: extract, flatten nested directories to base names,
// and wrap failures in an error carrying the trading date.
std::vector<std::pair<std::string, std::string>> extract_archive(std::string_view payload,
                                                                 Date trade_date);

}  // namespace b3opt::ingest
