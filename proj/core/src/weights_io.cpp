#include "mergesim/weights_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

static_assert(std::endian::native == std::endian::little,
              "weight files are little-endian; big-endian hosts are unsupported");

namespace mergesim {

namespace {

constexpr char kMagic[4] = {'M', 'S', 'Q', 'W'};
constexpr uint32_t kVersion = 1;

uint64_t fnv1a(const std::string& bytes) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

template <typename T>
void append(std::string& buf, const T& value) {
    buf.append(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read(std::istream& in, const char* what) {
    T value;
    if (!in.read(reinterpret_cast<char*>(&value), sizeof(T)))
        throw std::runtime_error(std::string("weight file truncated at ") + what);
    return value;
}

} // namespace

void save_weights(const DenseNet<float>& net, const std::filesystem::path& path) {
    std::string payload;
    payload.append(kMagic, 4);
    append(payload, kVersion);
    append(payload, static_cast<uint32_t>(net.layers.size()));
    for (const auto& l : net.layers) {
        append(payload, static_cast<uint32_t>(l.out));
        append(payload, static_cast<uint32_t>(l.in));
    }
    for (const auto& l : net.layers) {
        payload.append(reinterpret_cast<const char*>(l.w.data()), l.w.size() * sizeof(float));
        payload.append(reinterpret_cast<const char*>(l.b.data()), l.b.size() * sizeof(float));
    }
    const uint64_t checksum = fnv1a(payload);
    append(payload, checksum);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("save_weights: cannot open " + path.string());
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) throw std::runtime_error("save_weights: write failed for " + path.string());
}

DenseNet<float> load_weights(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_weights: cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < 4 + sizeof(uint32_t) * 2 + sizeof(uint64_t))
        throw std::runtime_error("load_weights: file too short");

    const std::string payload = bytes.substr(0, bytes.size() - sizeof(uint64_t));
    uint64_t stored = 0;
    std::memcpy(&stored, bytes.data() + payload.size(), sizeof(uint64_t));
    if (stored != fnv1a(payload))
        throw std::runtime_error("load_weights: checksum mismatch");

    std::istringstream stream(payload);
    char magic[4];
    stream.read(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("load_weights: bad magic");
    const auto version = read<uint32_t>(stream, "version");
    if (version != kVersion)
        throw std::runtime_error("load_weights: unsupported version " + std::to_string(version));
    const auto n_layers = read<uint32_t>(stream, "layer count");
    if (n_layers == 0 || n_layers > 64)
        throw std::runtime_error("load_weights: implausible layer count");

    DenseNet<float> net;
    for (uint32_t i = 0; i < n_layers; ++i) {
        DenseLayer<float> l;
        l.out = static_cast<int>(read<uint32_t>(stream, "rows"));
        l.in = static_cast<int>(read<uint32_t>(stream, "cols"));
        if (l.out <= 0 || l.in <= 0)
            throw std::runtime_error("load_weights: bad layer dimensions");
        net.layers.push_back(std::move(l));
    }
    for (uint32_t i = 1; i < n_layers; ++i) {
        if (net.layers[i].in != net.layers[i - 1].out)
            throw std::runtime_error("load_weights: layer dimensions do not chain");
    }
    for (auto& l : net.layers) {
        l.w.resize(static_cast<size_t>(l.out) * l.in);
        l.b.resize(l.out);
        if (!stream.read(reinterpret_cast<char*>(l.w.data()),
                         static_cast<std::streamsize>(l.w.size() * sizeof(float))) ||
            !stream.read(reinterpret_cast<char*>(l.b.data()),
                         static_cast<std::streamsize>(l.b.size() * sizeof(float))))
            throw std::runtime_error("load_weights: parameter block truncated");
    }
    stream.peek();
    if (!stream.eof()) throw std::runtime_error("load_weights: trailing bytes");
    return net;
}

} // namespace mergesim
