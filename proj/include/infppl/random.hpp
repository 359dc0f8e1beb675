#pragma once

// Counter-based random streams (Philox 4x32, 10 rounds). A stream is
// addressed by (seed, stream id) and its draws by a block counter, so any
// number of statistically independent substreams can be handed out without
// shared state: same address, same bits, on every run and on every thread.

#include <array>
#include <cstdint>

namespace infppl {

namespace detail {

inline std::array<std::uint32_t, 4> philox10(std::array<std::uint32_t, 4> ctr,
                                             std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t m0 = std::uint64_t{0xD2511F53u} * ctr[0];
    const std::uint64_t m1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
    ctr = {static_cast<std::uint32_t>(m1 >> 32) ^ ctr[1] ^ key[0],
           static_cast<std::uint32_t>(m1),
           static_cast<std::uint32_t>(m0 >> 32) ^ ctr[3] ^ key[1],
           static_cast<std::uint32_t>(m0)};
    key[0] += 0x9E3779B9u;
    key[1] += 0xBB67AE85u;
  }
  return ctr;
}

}  // namespace detail

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_{static_cast<std::uint32_t>(stream),
                static_cast<std::uint32_t>(stream >> 32)} {}

  std::uint32_t next_u32() {
    if (avail_ == 0) {
      block_ = detail::philox10({static_cast<std::uint32_t>(counter_),
                                 static_cast<std::uint32_t>(counter_ >> 32),
                                 stream_[0], stream_[1]},
                                key_);
      ++counter_;
      avail_ = 4;
    }
    return block_[4 - avail_--];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // Uniform draw strictly inside (0, 1): safe under log and tan.
  double next_double() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 2> stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int avail_ = 0;
};

}  // namespace infppl
