#include "specshare/rng.hpp"

#include <cmath>

namespace specshare {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

RandomStream RandomStream::derive(std::uint64_t master, StreamPurpose purpose,
                                  std::uint64_t index) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
  h = splitmix64(h ^ index);
  return RandomStream(h);
}

std::uint64_t RandomStream::poisson(double mean) {
  if (!(mean > 0)) return 0;
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(engine_);
}

ChannelStreams ChannelStreams::derive(std::uint64_t master,
                                      std::uint64_t index) {
  return ChannelStreams{
      RandomStream::derive(master, StreamPurpose::Ppp, index),
      RandomStream::derive(master, StreamPurpose::Fading, index),
      RandomStream::derive(master, StreamPurpose::CrossFading, index),
      RandomStream::derive(master, StreamPurpose::ProprietaryFading, index),
  };
}

}  // namespace specshare
