#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace specshare {

/// What a stream is used for. Separate purposes never share draws, so two
/// experiments seeded alike see common random numbers on every purpose they
/// have in common.
enum class StreamPurpose : std::uint64_t {
  Arrivals = 1,
  Ppp = 2,
  Fading = 3,
  CrossFading = 4,
  ProprietaryFading = 5,
  Synthetic = 6,
};

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for (master seed, purpose, index).
  static RandomStream derive(std::uint64_t master, StreamPurpose purpose,
                             std::uint64_t index = 0);

  /// Uniform on the open interval (0, 1).
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Unit-mean exponential.
  double exponential() { return -std::log(uniform_open()); }

  std::uint64_t poisson(double mean);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Named sub-streams for one channel experiment.
struct ChannelStreams {
  RandomStream ppp;
  RandomStream fading;
  RandomStream cross;
  RandomStream proprietary;

  static ChannelStreams derive(std::uint64_t master, std::uint64_t index = 0);
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace specshare
