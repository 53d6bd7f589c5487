#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

namespace rsenv {

/// Canonical JSON: UTF-8, object keys sorted lexicographically at every
/// level, no insignificant whitespace, reals as shortest round-trip
/// decimals. Serializing equal documents always yields identical bytes.
/// Non-finite reals are rejected.
std::string canonical_dump(const nlohmann::json& value);

/// Lowercase hex sha256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// Lowercase hex sha256 of a file's bytes. Throws Error when unreadable.
std::string sha256_file(const std::filesystem::path& path);

/// Shortest decimal representation that round-trips to the same double.
std::string shortest_double(double value);

}  // namespace rsenv
