#pragma once

// On-disk forms of an encryption.
//
// Key files are the only artifact a party shares:
//   text    one decimal key per line, ascending, newline-terminated
//   packed  "NSUM" | version u8 | level u8 | key_width u8 | count u64 LE,
//           then `count` little-endian keys of key_width bits
// The index sidecar holds the private set and its inverted index and never
// leaves the owner's machine.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "nsum/encrypt.hpp"

namespace nsum {

enum class KeyFormat { text, packed };

inline constexpr std::uint8_t kPackedVersion = 1;
inline constexpr std::size_t kPackedHeaderSize = 15;

struct KeyFileHeader {
    std::uint8_t version = kPackedVersion;
    std::uint8_t level = 1;
    std::uint8_t key_width = 64;
    std::uint64_t key_count = 0;
};

// 32 when every key fits in 32 bits, else 64.
std::uint8_t minimal_key_width(std::span<const Key> keys);

struct KeyFile {
    // Absent for text files, which carry no header.
    std::optional<unsigned> level;
    std::vector<Key> keys;
};

void write_text_keys(std::ostream& out, std::span<const Key> keys);
// `key_width` 0 picks minimal_key_width(); 32 is rejected when a key needs 64 bits.
void write_packed_keys(std::ostream& out, const EncryptedSet& set, std::uint8_t key_width = 0);

// Both readers check that keys are strictly ascending.
KeyFile read_text_keys(std::istream& in);
KeyFile read_packed_keys(std::istream& in);
// Dispatches on the packed magic.
KeyFile read_key_file(std::istream& in);
KeyFile load_key_file(const std::filesystem::path& path);

void save_key_file(const std::filesystem::path& path, const EncryptedSet& set, KeyFormat format,
                   std::uint8_t key_width = 0);

// Level of `file` when known, else `fallback`.
EncryptedSet to_encrypted_set(const KeyFile& file, unsigned fallback_level);

struct IndexSidecar {
    PrivateSet set;
    InvertedIndex index;

    EncryptedSet encrypted() const;
};

void write_index(std::ostream& out, const PrivateSet& set, const InvertedIndex& index);
IndexSidecar read_index(std::istream& in);
void save_index(const std::filesystem::path& path, const PrivateSet& set, const InvertedIndex& index);
IndexSidecar load_index(const std::filesystem::path& path);

}  // namespace nsum
