#include "b3opt/ingest/url.hpp"

namespace b3opt::ingest {

std::string download_path(Date date) {
    return "/pesquisapregao/download?filelist=PE" + date.to_yymmdd() + ".ex_";
}

std::string build_download_url(Date date, std::string_view base_url) {
    return std::string(base_url) + download_path(date);
}

std::string archive_name(Date date) {
    return "PE" + date.to_yymmdd() + ".ex_";
}

}  // namespace b3opt::ingest
