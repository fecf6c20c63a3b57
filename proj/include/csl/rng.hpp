#pragma once

#include <complex>
#include <cstdint>

namespace csl {

/// Counter-based random stream.
///
/// Output k of a stream with key K is prf(K, k), a splitmix64-style
/// permutation of the counter mixed with the key. Streams split into
/// independent children by index, so a sample is addressed by the chain
/// (master_seed, trial_index, slot_index, counter) and never depends on
/// how many draws other streams made. All derived quantities (uniform,
/// normal, complex normal) consume the stream in a fixed documented
/// order, which makes every sample bit-reproducible.
class RngStream {
  public:
    explicit RngStream(std::uint64_t key) : key_(key) {}

    /// Independent child stream. split(i) != split(j) for i != j.
    RngStream split(std::uint64_t index) const;

    std::uint64_t next_u64();

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01();

    /// Standard real normal N(0, 1), Box-Muller. Consumes two u64 per pair;
    /// the second value of each pair is cached.
    double normal();

    /// Standard complex normal CN(0, 1): E|z|^2 = 1, re and im ~ N(0, 1/2).
    std::complex<double> complex_normal();

    std::uint64_t key() const noexcept { return key_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace csl
