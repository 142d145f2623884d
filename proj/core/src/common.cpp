#include "scarwid/common.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

namespace scarwid {

double Rng::normal(double mean, double stddev) {
    // avoid log(0)
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(2.0 * M_PI * u2);
}

Fnv1a& Fnv1a::update_u64(std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    return update(b, 8);
}

Fnv1a& Fnv1a::update_f64(double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    return update_u64(bits);
}

std::string Fnv1a::hex() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash_));
    return std::string(buf);
}

std::uint64_t hash_bytes(const void* data, std::size_t n) {
    return Fnv1a().update(data, n).value();
}

std::string hash_hex(std::string_view s) {
    return Fnv1a().update(s).hex();
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    Fnv1a h;
    h.update_u64(a).update_u64(b).update_u64(c);
    return h.value();
}

}  // namespace scarwid
