#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace tweetsent {

std::uint32_t fnv1a32(std::string_view bytes);
std::uint64_t fnv1a64(std::string_view bytes);

// Lowercase, zero-padded 16-digit hex.
std::string hex64(std::uint64_t value);

// fnv1a64 of a file's bytes, as hex. Throws DataError if unreadable.
std::string file_digest(const std::filesystem::path& path);

}  // namespace tweetsent
