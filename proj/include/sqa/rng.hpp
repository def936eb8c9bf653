#ifndef SQA_RNG_HPP
#define SQA_RNG_HPP

#include <cstdint>

namespace sqa {

// Philox4x32-10 counter-based generator. Stateless: every draw is a pure
// function of (seed, stream, counter), which is what makes runs bit-identical
// across platforms and lets replicas own disjoint substreams.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // 64 uniform bits for (stream, counter).
  std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const {
    std::uint32_t c[4] = {static_cast<std::uint32_t>(counter),
                          static_cast<std::uint32_t>(counter >> 32),
                          static_cast<std::uint32_t>(stream),
                          static_cast<std::uint32_t>(stream >> 32)};
    std::uint32_t k[2] = {static_cast<std::uint32_t>(seed_),
                          static_cast<std::uint32_t>(seed_ >> 32)};
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = 0xD2511F53ull * c[0];
      const std::uint64_t p1 = 0xCD9E8D57ull * c[2];
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      const std::uint32_t n0 = hi1 ^ c[1] ^ k[0];
      const std::uint32_t n2 = hi0 ^ c[3] ^ k[1];
      c[0] = n0;
      c[1] = lo1;
      c[2] = n2;
      c[3] = lo0;
      k[0] += 0x9E3779B9u;
      k[1] += 0xBB67AE85u;
    }
    return (static_cast<std::uint64_t>(c[1]) << 32) | c[0];
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform(std::uint64_t stream, std::uint64_t counter) const {
    return static_cast<double>(bits(stream, counter) >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t seed_;
};

// Sequential view over one substream; hands out consecutive counters.
class StreamRng {
 public:
  StreamRng(const CounterRng& rng, std::uint64_t stream, std::uint64_t start = 0)
      : rng_(&rng), stream_(stream), counter_(start) {}

  double uniform() { return rng_->uniform(stream_, counter_++); }
  std::uint64_t bits() { return rng_->bits(stream_, counter_++); }
  std::uint64_t counter() const { return counter_; }

 private:
  const CounterRng* rng_;
  std::uint64_t stream_;
  std::uint64_t counter_;
};

}  // namespace sqa

#endif
