#pragma once

#include "mergesim/qnet.hpp"

#include <filesystem>

namespace mergesim {

/// Binary weight checkpoint: magic, format version, layer count, per-layer
/// (rows, cols) headers, little-endian IEEE-754 32-bit parameters, trailing
/// FNV-1a checksum. Round-trips byte-identically.
void save_weights(const DenseNet<float>& net, const std::filesystem::path& path);
DenseNet<float> load_weights(const std::filesystem::path& path);

} // namespace mergesim
