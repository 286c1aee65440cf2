#pragma once

#include <cstdint>

namespace fsvar {

/// Counter-keyed random stream (xoshiro256++ seeded through splitmix64).
/// Substreams keyed by (seed, iteration, step, index) are statistically
/// independent and cheap to construct, so per-time and per-equation updates
/// produce the same draws whether they run serially or in parallel.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed);

    static RngStream substream(std::uint64_t seed, std::uint64_t iteration,
                               std::uint64_t step, std::uint64_t index);

    std::uint64_t next_u64();

    double uniform();                      // open (0, 1)
    double uniform(double a, double b);
    double normal();                       // standard normal, polar method
    double exponential(double rate = 1.0);
    double gamma(double shape, double scale = 1.0);   // Marsaglia-Tsang
    double inverse_gamma(double shape, double rate);
    double chi_squared(double df);

  private:
    std::uint64_t s_[4];
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace fsvar
