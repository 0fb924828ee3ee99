#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Each output
// block is a pure function of (counter, key), so the i-th draw does not
// depend on how work is split across threads.

#include <array>
#include <cstdint>

namespace mcshane {

class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Block generate(Block ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

  /// Uniform double in [0, 1) built from the first two words of a block.
  static double uniform(std::uint64_t seed, std::uint64_t index, std::uint32_t stream = 0) {
    const Block out = generate({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), stream, 0},
                               {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
    const std::uint64_t bits = (std::uint64_t{out[0]} << 32) | out[1];
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53, kM1 = 0xCD9E8D57;
  static constexpr std::uint32_t kW0 = 0x9E3779B9, kW1 = 0xBB67AE85;
};

}  // namespace mcshane
