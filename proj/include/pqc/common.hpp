#pragma once

#include <charconv>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace pqc {

// --- Errors ---

struct SceneInfeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ShapeMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidState : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InfeasibleAction : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoFeasibleAction : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PenaltyInvalid : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyBuffer : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- Number formatting (locale-independent) ---

// 9 significant digits, used by text file formats that pin their float width.
inline std::string fmt_g9(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

// Shortest round-trip representation, used by CSV output.
inline std::string fmt_shortest(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw FormatError("bad float: '" + std::string(s) + "'");
    return v;
}

inline long long parse_int(std::string_view s) {
    long long v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw FormatError("bad integer: '" + std::string(s) + "'");
    return v;
}

// --- Seed derivation ---

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline uint64_t mix_seed(uint64_t a, uint64_t b) {
    return splitmix64(splitmix64(a) ^ (0x9e3779b97f4a7c15ull + b));
}

inline uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c) {
    return mix_seed(mix_seed(a, b), c);
}

// FNV-1a over a byte string, used for config fingerprints.
inline uint64_t fnv1a(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// --- Little-endian binary IO helpers ---

inline void put_bytes(std::vector<std::uint8_t>& out, const void* p, size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out.insert(out.end(), b, b + n);
}

template <typename T>
void put_pod(std::vector<std::uint8_t>& out, const T& v) {
    static_assert(std::is_trivially_copyable_v<T>);
    put_bytes(out, &v, sizeof(T));
}

struct ByteReader {
    const std::uint8_t* p;
    const std::uint8_t* end;

    explicit ByteReader(const std::vector<std::uint8_t>& buf)
        : p(buf.data()), end(buf.data() + buf.size()) {}

    template <typename T>
    T get() {
        static_assert(std::is_trivially_copyable_v<T>);
        if (p + sizeof(T) > end) throw FormatError("truncated file");
        T v;
        std::memcpy(&v, p, sizeof(T));
        p += sizeof(T);
        return v;
    }

    void get_raw(void* dst, size_t n) {
        if (p + n > end) throw FormatError("truncated file");
        std::memcpy(dst, p, n);
        p += n;
    }

    bool exhausted() const { return p == end; }
};

}  // namespace pqc
