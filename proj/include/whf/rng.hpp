#pragma once

#include <array>
#include <cstdint>

namespace whf {

// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

// Sequential generator over one counter-based stream. The stream is keyed by
// the 64-bit seed and addressed by (path, stream id), so every path draws the
// same numbers whatever thread runs it.
class PathRng {
 public:
  PathRng(std::uint64_t seed, std::uint64_t path, std::uint32_t stream = 0);

  std::uint32_t next_u32();
  // Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  // Standard normal by Box-Muller; pairs are consumed in order.
  double normal();
  double exponential(double rate);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int pos_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace whf
