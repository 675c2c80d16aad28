#include "b3opt/net/serialize.hpp"

#include <bit>
#include <cstring>
#include <map>
#include <vector>

#include "b3opt/core/csv.hpp"
#include "b3opt/core/errors.hpp"

namespace b3opt::net {

namespace {

constexpr char kMagic[8] = {'B', '3', 'O', 'P', 'T', 'N', 'E', 'T'};
constexpr uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "artifact layout assumes a little-endian host");

void put_u16(std::string& out, uint16_t v) { out.append(reinterpret_cast<char*>(&v), 2); }
void put_u32(std::string& out, uint32_t v) { out.append(reinterpret_cast<char*>(&v), 4); }
void put_u64(std::string& out, uint64_t v) { out.append(reinterpret_cast<char*>(&v), 8); }
void put_f64(std::string& out, double v) { out.append(reinterpret_cast<char*>(&v), 8); }

struct Reader {
    std::string_view data;
    size_t pos = 0;

    void need(size_t n, const char* what) {
        if (pos + n > data.size())
            throw InputError(std::string("artifact truncated while reading ") + what);
    }
    uint16_t u16(const char* what) {
        need(2, what);
        uint16_t v;
        std::memcpy(&v, data.data() + pos, 2);
        pos += 2;
        return v;
    }
    uint32_t u32(const char* what) {
        need(4, what);
        uint32_t v;
        std::memcpy(&v, data.data() + pos, 4);
        pos += 4;
        return v;
    }
    uint64_t u64(const char* what) {
        need(8, what);
        uint64_t v;
        std::memcpy(&v, data.data() + pos, 8);
        pos += 8;
        return v;
    }
    double f64(const char* what) {
        need(8, what);
        double v;
        std::memcpy(&v, data.data() + pos, 8);
        pos += 8;
        return v;
    }
    std::string str(size_t n, const char* what) {
        need(n, what);
        std::string s(data.substr(pos, n));
        pos += n;
        return s;
    }
};

void put_block(std::string& out, const char* name, const Eigen::MatrixXd& t) {
    uint16_t len = static_cast<uint16_t>(std::strlen(name));
    put_u16(out, len);
    out.append(name, len);
    put_u32(out, static_cast<uint32_t>(t.rows()));
    put_u32(out, static_cast<uint32_t>(t.cols()));
    for (Eigen::Index r = 0; r < t.rows(); ++r)
        for (Eigen::Index c = 0; c < t.cols(); ++c) put_f64(out, t(r, c));
}

struct Block {
    uint32_t rows = 0, cols = 0;
    std::vector<double> values;  // row-major
};

Block read_block(Reader& r, std::string& name_out) {
    uint16_t len = r.u16("block name length");
    name_out = r.str(len, "block name");
    Block b;
    b.rows = r.u32("block rows");
    b.cols = r.u32("block cols");
    uint64_t count = static_cast<uint64_t>(b.rows) * b.cols;
    if (count > (1ull << 30)) throw InputError("artifact block '" + name_out + "' implausibly large");
    b.values.resize(count);
    for (uint64_t i = 0; i < count; ++i) b.values[i] = r.f64("block data");
    return b;
}

Eigen::MatrixXd to_matrix(const Block& b, Eigen::Index rows, Eigen::Index cols,
                          const std::string& name) {
    if (b.rows != static_cast<uint32_t>(rows) || b.cols != static_cast<uint32_t>(cols))
        throw InputError("artifact block '" + name + "' has shape " + std::to_string(b.rows) +
                         "x" + std::to_string(b.cols) + ", expected " + std::to_string(rows) +
                         "x" + std::to_string(cols));
    Eigen::MatrixXd m(rows, cols);
    size_t k = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = b.values[k++];
    return m;
}

Eigen::RowVectorXd to_row(const Block& b, Eigen::Index size, const std::string& name) {
    return Eigen::RowVectorXd(to_matrix(b, 1, size, name));
}

}  // namespace

std::string model_to_bytes(const Model& m) {
    std::string out;
    out.append(kMagic, sizeof(kMagic));
    put_u32(out, kVersion);
    put_u32(out, static_cast<uint32_t>(m.config.input_dim));
    put_u32(out, static_cast<uint32_t>(m.config.hidden_size));
    put_f64(out, m.config.dropout_p);
    put_f64(out, m.config.leaky_slope);
    put_f64(out, m.config.bn_momentum);
    put_f64(out, m.config.bn_epsilon);
    put_u64(out, m.step_count);

    uint32_t block_count = 2 + 14 + 6;  // stats + params + running stats
    put_u32(out, block_count);

    Eigen::MatrixXd feat_mean = m.stats.mean;
    Eigen::MatrixXd feat_std = m.stats.std;
    put_block(out, "feat_mean", feat_mean);
    put_block(out, "feat_std", feat_std);
    for_each_param(const_cast<Model&>(m), [&](const char* name, const auto& t) {
        put_block(out, name, Eigen::MatrixXd(t));
    });
    put_block(out, "bn1_running_mean", Eigen::MatrixXd(m.bn1.running_mean));
    put_block(out, "bn1_running_var", Eigen::MatrixXd(m.bn1.running_var));
    put_block(out, "bn2_running_mean", Eigen::MatrixXd(m.bn2.running_mean));
    put_block(out, "bn2_running_var", Eigen::MatrixXd(m.bn2.running_var));
    put_block(out, "bn3_running_mean", Eigen::MatrixXd(m.bn3.running_mean));
    put_block(out, "bn3_running_var", Eigen::MatrixXd(m.bn3.running_var));
    return out;
}

Model model_from_bytes(std::string_view bytes) {
    Reader r{bytes};
    std::string magic = r.str(sizeof(kMagic), "magic");
    if (std::memcmp(magic.data(), kMagic, sizeof(kMagic)) != 0)
        throw InputError("not a model artifact (bad magic)");
    uint32_t version = r.u32("version");
    if (version != kVersion)
        throw InputError("unsupported artifact version " + std::to_string(version) +
                         " (expected " + std::to_string(kVersion) + ")");

    NetConfig cfg;
    cfg.input_dim = static_cast<int>(r.u32("input_dim"));
    cfg.hidden_size = static_cast<int>(r.u32("hidden_size"));
    cfg.dropout_p = r.f64("dropout_p");
    cfg.leaky_slope = r.f64("leaky_slope");
    cfg.bn_momentum = r.f64("bn_momentum");
    cfg.bn_epsilon = r.f64("bn_epsilon");
    uint64_t step_count = r.u64("step_count");
    uint32_t block_count = r.u32("block count");

    std::map<std::string, Block> blocks;
    for (uint32_t i = 0; i < block_count; ++i) {
        std::string name;
        Block b = read_block(r, name);
        if (!blocks.emplace(std::move(name), std::move(b)).second)
            throw InputError("duplicate artifact block");
    }
    if (r.pos != bytes.size()) throw InputError("trailing bytes after artifact blocks");

    auto get = [&](const char* name) -> const Block& {
        auto it = blocks.find(name);
        if (it == blocks.end())
            throw InputError(std::string("artifact missing block '") + name + "'");
        return it->second;
    };

    Eigen::Index h = cfg.hidden_size;
    Eigen::Index d = cfg.input_dim;
    if (h <= 0 || d <= 0) throw InputError("artifact has non-positive dimensions");

    Model m;
    m.config = cfg;
    m.step_count = step_count;
    m.stats.mean = to_row(get("feat_mean"), d, "feat_mean");
    m.stats.std = to_row(get("feat_std"), d, "feat_std");
    m.w1 = to_matrix(get("w1"), h, d, "w1");
    m.b1 = to_row(get("b1"), h, "b1");
    m.w2 = to_matrix(get("w2"), h, h, "w2");
    m.b2 = to_row(get("b2"), h, "b2");
    m.w3 = to_matrix(get("w3"), h, h, "w3");
    m.b3 = to_row(get("b3"), h, "b3");
    m.w4 = to_matrix(get("w4"), 1, h, "w4");
    m.b4 = to_row(get("b4"), 1, "b4");
    auto load_bn = [&](BatchNorm& bn, const char* g, const char* b, const char* rm,
                       const char* rv) {
        bn.gamma = to_row(get(g), h, g);
        bn.beta = to_row(get(b), h, b);
        bn.running_mean = to_row(get(rm), h, rm);
        bn.running_var = to_row(get(rv), h, rv);
    };
    load_bn(m.bn1, "bn1_gamma", "bn1_beta", "bn1_running_mean", "bn1_running_var");
    load_bn(m.bn2, "bn2_gamma", "bn2_beta", "bn2_running_mean", "bn2_running_var");
    load_bn(m.bn3, "bn3_gamma", "bn3_beta", "bn3_running_mean", "bn3_running_var");

    if ((m.bn1.running_var.array() < 0).any() || (m.bn2.running_var.array() < 0).any() ||
        (m.bn3.running_var.array() < 0).any())
        throw InputError("artifact has negative running variance");
    return m;
}

void save_model(const Model& model, const std::string& path) {
    write_file(path, model_to_bytes(model));
}

Model load_model(const std::string& path) {
    return model_from_bytes(read_file(path));
}

}  // namespace b3opt::net
