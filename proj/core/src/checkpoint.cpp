#include "checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <vector>

namespace scarwid::detail {

using nlohmann::json;

namespace {

void append_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t read_u32(const std::string& buf, std::size_t& off, const std::string& file) {
    if (off + 4 > buf.size()) throw Error("truncated checkpoint file: " + file);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[off + i])) << (8 * i);
    off += 4;
    return v;
}

void append_f32(std::string& out, float f) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    append_u32(out, bits);
}

float read_f32(const std::string& buf, std::size_t& off, const std::string& file) {
    std::uint32_t bits = read_u32(buf, off, file);
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
}

}  // namespace

std::string serialize_checkpoint(json header, const nn::ParamStore& params) {
    json tensors = json::array();
    for (const auto& p : params.all())
        tensors.push_back({{"name", p->name},
                           {"rows", p->value.rows()},
                           {"cols", p->value.cols()},
                           {"frozen", p->frozen}});
    header["tensors"] = std::move(tensors);

    std::string out;
    out.append(kModelMagic, 4);
    append_u32(out, kModelVersion);
    const std::string hdr = header.dump();
    append_u32(out, static_cast<std::uint32_t>(hdr.size()));
    out += hdr;
    for (const auto& p : params.all())
        for (Eigen::Index r = 0; r < p->value.rows(); ++r)
            for (Eigen::Index c = 0; c < p->value.cols(); ++c)
                append_f32(out, static_cast<float>(p->value(r, c)));
    return out;
}

void save_checkpoint(const std::filesystem::path& path, json header,
                     const nn::ParamStore& params) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write checkpoint: " + path.string());
    const std::string bytes = serialize_checkpoint(std::move(header), params);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("short write on checkpoint: " + path.string());
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path,
                                 const std::string& expected_kind) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("checkpoint not found: " + path.string());
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    std::size_t off = 0;
    if (buf.size() < 4 || std::memcmp(buf.data(), kModelMagic, 4) != 0)
        throw Error("bad magic bytes in checkpoint file: " + path.string());
    off = 4;
    std::uint32_t version = read_u32(buf, off, path.string());
    if (version != kModelVersion)
        throw Error("unsupported checkpoint version " + std::to_string(version) + " in " +
                    path.string());
    std::uint32_t hlen = read_u32(buf, off, path.string());
    if (off + hlen > buf.size()) throw Error("truncated checkpoint file: " + path.string());
    json header;
    try {
        header = json::parse(buf.substr(off, hlen));
    } catch (const json::exception& e) {
        throw Error("corrupt checkpoint header in " + path.string() + ": " + e.what());
    }
    off += hlen;
    if (header.value("kind", "") != expected_kind)
        throw Error("checkpoint kind mismatch in " + path.string() + ": expected \"" +
                    expected_kind + "\", found \"" + header.value("kind", "?") + "\"");

    LoadedCheckpoint ck;
    for (const auto& t : header.at("tensors")) {
        const auto name = t.at("name").get<std::string>();
        const auto rows = t.at("rows").get<Eigen::Index>();
        const auto cols = t.at("cols").get<Eigen::Index>();
        Matrix m(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index c = 0; c < cols; ++c)
                m(r, c) = static_cast<double>(read_f32(buf, off, path.string()));
        ck.tensors.emplace(name, std::move(m));
    }
    ck.header = std::move(header);
    return ck;
}

}  // namespace scarwid::detail
