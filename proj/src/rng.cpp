#include "csl/rng.hpp"

#include <cmath>

namespace csl {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t prf(std::uint64_t key, std::uint64_t counter) { return mix64(key ^ mix64(counter)); }

}  // namespace

RngStream RngStream::split(std::uint64_t index) const {
    return RngStream(mix64(key_ + 0x632BE59BD9B4E019ull * (index + 1)));
}

std::uint64_t RngStream::next_u64() { return prf(key_, counter_++); }

double RngStream::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RngStream::normal() {
    if (have_cached_) {
        have_cached_ = false;
        return cached_;
    }
    double u1 = uniform01();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    cached_ = r * std::sin(t);
    have_cached_ = true;
    return r * std::cos(t);
}

std::complex<double> RngStream::complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * M_SQRT1_2, im * M_SQRT1_2};
}

}  // namespace csl
