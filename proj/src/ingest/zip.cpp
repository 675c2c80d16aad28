#include "b3opt/ingest/zip.hpp"

#include <zlib.h>

#include <cstdint>
#include <cstring>

namespace b3opt::ingest {

namespace {

constexpr uint32_t kEocdSig = 0x06054b50;     // end of central directory
constexpr uint32_t kCentralSig = 0x02014b50;  // central directory file header
constexpr uint32_t kLocalSig = 0x04034b50;    // local file header

uint16_t read_u16(std::string_view data, size_t off) {
    return static_cast<uint16_t>(static_cast<uint8_t>(data[off]) |
                                 (static_cast<uint8_t>(data[off + 1]) << 8));
}

uint32_t read_u32(std::string_view data, size_t off) {
    return static_cast<uint32_t>(static_cast<uint8_t>(data[off])) |
           (static_cast<uint32_t>(static_cast<uint8_t>(data[off + 1])) << 8) |
           (static_cast<uint32_t>(static_cast<uint8_t>(data[off + 2])) << 16) |
           (static_cast<uint32_t>(static_cast<uint8_t>(data[off + 3])) << 24);
}

std::string inflate_raw(std::string_view compressed, size_t expected_size) {
    std::string out(expected_size, '\0');
    z_stream zs{};
    if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) throw InputError("zlib inflate init failed");
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
    zs.avail_in = static_cast<uInt>(compressed.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = inflate(&zs, Z_FINISH);
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || zs.total_out != expected_size)
        throw InputError("deflate stream corrupt or truncated");
    return out;
}

}  // namespace

std::vector<ZipEntry> zip_extract(std::string_view payload) {
    if (payload.size() < 22) throw InputError("payload too small to be an archive");

    // EOCD: scan back over a possible archive comment.
    size_t eocd = std::string_view::npos;
    size_t scan_limit = payload.size() >= 22 + 65535 ? payload.size() - 22 - 65535 : 0;
    for (size_t i = payload.size() - 22 + 1; i-- > scan_limit;) {
        if (read_u32(payload, i) == kEocdSig) {
            eocd = i;
            break;
        }
    }
    if (eocd == std::string_view::npos) throw InputError("no end-of-central-directory record");

    uint16_t entry_count = read_u16(payload, eocd + 10);
    uint32_t cdir_size = read_u32(payload, eocd + 12);
    uint32_t cdir_offset = read_u32(payload, eocd + 16);
    if (static_cast<size_t>(cdir_offset) + cdir_size > payload.size())
        throw InputError("central directory out of bounds");

    std::vector<ZipEntry> entries;
    size_t pos = cdir_offset;
    for (uint16_t i = 0; i < entry_count; ++i) {
        if (pos + 46 > payload.size() || read_u32(payload, pos) != kCentralSig)
            throw InputError("bad central directory entry");
        uint16_t method = read_u16(payload, pos + 10);
        uint32_t crc = read_u32(payload, pos + 16);
        uint32_t comp_size = read_u32(payload, pos + 20);
        uint32_t uncomp_size = read_u32(payload, pos + 24);
        uint16_t name_len = read_u16(payload, pos + 28);
        uint16_t extra_len = read_u16(payload, pos + 30);
        uint16_t comment_len = read_u16(payload, pos + 32);
        uint32_t local_offset = read_u32(payload, pos + 42);
        if (pos + 46 + name_len > payload.size()) throw InputError("truncated entry name");
        std::string name(payload.substr(pos + 46, name_len));
        pos += 46 + name_len + extra_len + comment_len;

        if (!name.empty() && name.back() == '/') continue;  // directory marker

        if (static_cast<size_t>(local_offset) + 30 > payload.size() ||
            read_u32(payload, local_offset) != kLocalSig)
            throw InputError("bad local header for '" + name + "'");
        // Sizes come from the central directory; local ones may be zero when
        // the writer used a data descriptor.
        uint16_t local_name_len = read_u16(payload, local_offset + 26);
        uint16_t local_extra_len = read_u16(payload, local_offset + 28);
        size_t data_start = static_cast<size_t>(local_offset) + 30 + local_name_len + local_extra_len;
        if (data_start + comp_size > payload.size())
            throw InputError("truncated data for '" + name + "'");
        std::string_view raw = payload.substr(data_start, comp_size);

        std::string content;
        if (method == 0) {
            if (comp_size != uncomp_size) throw InputError("stored entry size mismatch");
            content.assign(raw);
        } else if (method == 8) {
            content = inflate_raw(raw, uncomp_size);
        } else {
            throw InputError("unsupported compression method " + std::to_string(method));
        }

        uint32_t actual_crc = static_cast<uint32_t>(
            crc32(0, reinterpret_cast<const Bytef*>(content.data()), static_cast<uInt>(content.size())));
        if (actual_crc != crc) throw InputError("CRC mismatch for '" + name + "'");

        entries.push_back({std::move(name), std::move(content)});
    }
    return entries;
}

std::vector<std::pair<std::string, std::string>> extract_archive(std::string_view payload,
                                                                 Date trade_date) {
    std::vector<ZipEntry> entries;
    try {
        entries = zip_extract(payload);
    } catch (const InputError& e) {
        throw ExtractError(trade_date, e.what());
    }
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(entries.size());
    for (auto& e : entries) {
        size_t slash = e.name.find_last_of('/');
        std::string base = slash == std::string::npos ? e.name : e.name.substr(slash + 1);
        out.emplace_back(std::move(base), std::move(e.content));
    }
    return out;
}

}  // namespace b3opt::ingest
