#pragma once

#include <string>
#include <string_view>

#include "b3opt/core/date.hpp"

namespace b3opt::ingest {

inline constexpr std::string_view kDefaultBaseUrl = "https://www.b3.com.br";

// Path + query for one daily options archive: /pesquisapregao/download?filelist=PEyymmdd.ex_
std::string download_path(Date date);

std::string build_download_url(Date date, std::string_view base_url = kDefaultBaseUrl);

// Archive file name for on-disk storage: PEyymmdd.ex_
std::string archive_name(Date date);

}  // namespace b3opt::ingest
