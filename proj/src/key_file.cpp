#include "nsum/key_file.hpp"

#include <array>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "nsum/error.hpp"

namespace nsum {

namespace {

constexpr std::array<char, 4> kMagic{'N', 'S', 'U', 'M'};
constexpr std::string_view kIndexMagic = "NSUM-INDEX";

void put_le(std::ostream& out, std::uint64_t v, std::size_t bytes) {
    for (std::size_t b = 0; b < bytes; ++b) out.put(static_cast<char>((v >> (8 * b)) & 0xff));
}

std::uint64_t get_le(const unsigned char* p, std::size_t bytes) {
    std::uint64_t v = 0;
    for (std::size_t b = 0; b < bytes; ++b) v |= std::uint64_t{p[b]} << (8 * b);
    return v;
}

void check_ascending(std::span<const Key> keys, const char* what) {
    for (std::size_t i = 1; i < keys.size(); ++i) {
        if (keys[i - 1] >= keys[i]) {
            throw FormatError(std::string(what) + ": keys are not strictly ascending at entry " + std::to_string(i + 1));
        }
    }
}

std::uint64_t parse_u64(std::string_view field, const std::string& context) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
        throw FormatError(context + ": '" + std::string(field) + "' is not a non-negative integer");
    }
    return v;
}

std::string next_line(std::istream& in, std::size_t& line_no, const char* expecting) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError(std::string("index file ends before ") + expecting);
    ++line_no;
    return line;
}

// Reads "<label> <count>".
std::uint64_t read_counted_header(std::istream& in, std::size_t& line_no, std::string_view label) {
    std::istringstream fields(next_line(in, line_no, std::string(label).c_str()));
    std::string name, count;
    if (!(fields >> name >> count) || name != label) {
        throw FormatError("index line " + std::to_string(line_no) + ": expected '" + std::string(label) + " <n>'");
    }
    return parse_u64(count, "index line " + std::to_string(line_no));
}

}  // namespace

std::uint8_t minimal_key_width(std::span<const Key> keys) {
    return (!keys.empty() && keys.back() > 0xffffffffULL) ? 64 : 32;
}

void write_text_keys(std::ostream& out, std::span<const Key> keys) {
    for (Key k : keys) out << k << '\n';
}

void write_packed_keys(std::ostream& out, const EncryptedSet& set, std::uint8_t key_width) {
    if (key_width == 0) key_width = minimal_key_width(set.keys);
    if (key_width != 32 && key_width != 64) throw PreconditionError("key width must be 32 or 64");
    if (key_width == 32 && minimal_key_width(set.keys) == 64) {
        throw PreconditionError("largest key does not fit in 32 bits");
    }
    if (set.level == 0 || set.level > 255) throw PreconditionError("level does not fit the packed header");
    out.write(kMagic.data(), kMagic.size());
    out.put(static_cast<char>(kPackedVersion));
    out.put(static_cast<char>(set.level));
    out.put(static_cast<char>(key_width));
    put_le(out, set.keys.size(), 8);
    for (Key k : set.keys) put_le(out, k, key_width / 8);
}

KeyFile read_text_keys(std::istream& in) {
    KeyFile file;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) throw FormatError("key file line " + std::to_string(line_no) + " is empty");
        file.keys.push_back(parse_u64(line, "key file line " + std::to_string(line_no)));
    }
    check_ascending(file.keys, "text key file");
    return file;
}

KeyFile read_packed_keys(std::istream& in) {
    std::array<unsigned char, kPackedHeaderSize> header{};
    if (!in.read(reinterpret_cast<char*>(header.data()), header.size())) {
        throw FormatError("packed key file is shorter than its header");
    }
    if (std::memcmp(header.data(), kMagic.data(), kMagic.size()) != 0) {
        throw FormatError("packed key file has bad magic");
    }
    if (header[4] != kPackedVersion) {
        throw FormatError("unsupported packed key file version " + std::to_string(header[4]));
    }
    const unsigned level = header[5];
    const unsigned width = header[6];
    if (level == 0) throw FormatError("packed key file declares level 0");
    if (width != 32 && width != 64) throw FormatError("packed key file declares key width " + std::to_string(width));
    const std::uint64_t count = get_le(header.data() + 7, 8);
    const std::size_t bytes = width / 8;

    KeyFile file;
    file.level = level;
    std::vector<unsigned char> buffer(bytes * 4096);
    std::uint64_t remaining = count;
    while (remaining > 0) {
        const std::size_t batch = static_cast<std::size_t>(std::min<std::uint64_t>(remaining, 4096));
        if (!in.read(reinterpret_cast<char*>(buffer.data()), static_cast<std::streamsize>(batch * bytes))) {
            throw FormatError("packed key file is truncated: expected " + std::to_string(count) + " keys");
        }
        for (std::size_t i = 0; i < batch; ++i) file.keys.push_back(get_le(buffer.data() + i * bytes, bytes));
        remaining -= batch;
    }
    if (in.peek() != std::char_traits<char>::eof()) throw FormatError("packed key file has trailing bytes");
    check_ascending(file.keys, "packed key file");
    return file;
}

KeyFile read_key_file(std::istream& in) {
    std::array<char, 4> head{};
    in.read(head.data(), head.size());
    const auto got = in.gcount();
    in.clear();
    in.seekg(0);
    if (got == 4 && head == kMagic) return read_packed_keys(in);
    return read_text_keys(in);
}

KeyFile load_key_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open key file " + path.string());
    return read_key_file(in);
}

void save_key_file(const std::filesystem::path& path, const EncryptedSet& set, KeyFormat format,
                   std::uint8_t key_width) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write key file " + path.string());
    if (format == KeyFormat::text) write_text_keys(out, set.keys);
    else write_packed_keys(out, set, key_width);
    if (!out) throw FormatError("failed writing key file " + path.string());
}

EncryptedSet to_encrypted_set(const KeyFile& file, unsigned fallback_level) {
    EncryptedSet set;
    set.level = file.level.value_or(fallback_level);
    set.keys = file.keys;
    return set;
}

EncryptedSet IndexSidecar::encrypted() const {
    EncryptedSet out;
    out.level = index.level();
    out.keys.assign(index.keys().begin(), index.keys().end());
    out.source_element_count = set.size();
    return out;
}

void write_index(std::ostream& out, const PrivateSet& set, const InvertedIndex& index) {
    out << kIndexMagic << " 1\n";
    out << "level " << index.level() << '\n';
    out << "elements " << set.size() << '\n';
    for (std::size_t i = 0; i < set.size(); ++i) {
        out << set.elements()[i];
        for (Value v : set.resolved()[i]) out << ' ' << v;
        out << '\n';
    }
    out << "keys " << index.size() << '\n';
    for (std::size_t i = 0; i < index.size(); ++i) {
        out << index.keys()[i];
        for (Value v : index.posting_at(i)) out << ' ' << v;
        out << '\n';
    }
}

IndexSidecar read_index(std::istream& in) {
    std::size_t line_no = 0;
    {
        std::istringstream fields(next_line(in, line_no, "its header"));
        std::string magic, version;
        if (!(fields >> magic >> version) || magic != kIndexMagic) throw FormatError("not an index sidecar file");
        if (version != "1") throw FormatError("unsupported index sidecar version " + version);
    }
    const std::uint64_t level = read_counted_header(in, line_no, "level");
    if (level == 0) throw FormatError("index sidecar declares level 0");

    IndexSidecar sidecar;
    const std::uint64_t elements = read_counted_header(in, line_no, "elements");
    for (std::uint64_t e = 0; e < elements; ++e) {
        std::istringstream fields(next_line(in, line_no, "all elements are listed"));
        const std::string context = "index line " + std::to_string(line_no);
        std::string id, field;
        fields >> id;
        std::vector<Value> values;
        while (fields >> field) values.push_back(parse_u64(field, context));
        try {
            sidecar.set.add(id, OmegaSet::from_values(std::move(values)));
        } catch (const PreconditionError& err) {
            throw FormatError(context + ": " + err.what());
        }
    }

    const std::uint64_t key_count = read_counted_header(in, line_no, "keys");
    std::vector<Key> keys;
    std::vector<std::size_t> offsets{0};
    std::vector<Value> values;
    for (std::uint64_t k = 0; k < key_count; ++k) {
        std::istringstream fields(next_line(in, line_no, "all keys are listed"));
        const std::string context = "index line " + std::to_string(line_no);
        std::string field;
        if (!(fields >> field)) throw FormatError(context + " is empty");
        keys.push_back(parse_u64(field, context));
        while (fields >> field) values.push_back(parse_u64(field, context));
        offsets.push_back(values.size());
    }
    sidecar.index = InvertedIndex(static_cast<unsigned>(level), std::move(keys), std::move(offsets), std::move(values));
    return sidecar;
}

void save_index(const std::filesystem::path& path, const PrivateSet& set, const InvertedIndex& index) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write index file " + path.string());
    write_index(out, set, index);
    if (!out) throw FormatError("failed writing index file " + path.string());
}

IndexSidecar load_index(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open index file " + path.string());
    return read_index(in);
}

}  // namespace nsum
