#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hippo/memory_store.hpp"

namespace hippo {

inline constexpr char kStoreMagic[8] = {'H', 'I', 'P', 'P', 'O', 'D', 'W', 'M'};
inline constexpr std::uint32_t kStoreFormatVersion = 1;

// Serializes the full store deterministically; identical store state yields
// byte-identical images. See docs/FORMAT.md for the exact layout.
std::vector<std::uint8_t> serialize_store(const MemoryStore& store);

// Atomic save (write-temp-then-rename). Returns the byte count written.
// The store must be quiescent: no in-flight ingest.
std::uint64_t save_store(const MemoryStore& store, const std::filesystem::path& destination);

// Parses an image produced by serialize_store, revalidating the checksum
// and the structural invariants. Throws FormatError on unrecognized magic
// or version and CorruptionError on checksum mismatch or truncation.
MemoryStore parse_store(const std::vector<std::uint8_t>& image);

MemoryStore load_store(const std::filesystem::path& source);

// CRC-64/XZ over a byte span; the image's trailing checksum.
std::uint64_t crc64(const std::uint8_t* data, std::size_t size);

}  // namespace hippo
