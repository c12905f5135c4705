#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ideate {

/// FNV-1a 64-bit. Stable across platforms and runs; used for the
/// reproducibility stamps in reports and judge results (not security).
class Fnv1a64 {
public:
    Fnv1a64& update(std::string_view data) {
        for (unsigned char c : data) {
            state_ ^= c;
            state_ *= 0x100000001b3ULL;
        }
        return *this;
    }

    std::uint64_t value() const noexcept { return state_; }

    std::string hex() const {
        static const char* digits = "0123456789abcdef";
        std::string out(16, '0');
        std::uint64_t v = state_;
        for (int i = 15; i >= 0; --i) {
            out[static_cast<std::size_t>(i)] = digits[v & 0xF];
            v >>= 4;
        }
        return out;
    }

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::uint64_t fnv1a64(std::string_view data) {
    return Fnv1a64().update(data).value();
}

inline std::string fnv1a64_hex(std::string_view data) {
    return Fnv1a64().update(data).hex();
}

} // namespace ideate
