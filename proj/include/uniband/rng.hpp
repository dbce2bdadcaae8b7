#pragma once

#include <cstdint>

namespace uniband {

//! Standard-normal quantile (Wichura's rational approximation, double precision).
double normal_quantile(double p);

//! xoshiro256++ stream with splitmix64 seeding.
//!
//! Streams are derived as pure functions of (master seed, index, tag), so any
//! parallel schedule that assigns work by index reproduces the same variates.
class Rng {
public:
  explicit Rng(std::uint64_t seed);

  //! Independent stream for task `index` under `master`; `tag` separates
  //! stream families (sample draws vs bootstrap weights vs generic use).
  static Rng substream(std::uint64_t master, std::uint64_t index, std::uint64_t tag);

  std::uint64_t next_u64();

  //! Uniform on the open interval (0, 1).
  double uniform01();

  //! Standard normal via inverse-CDF of uniform01().
  double normal();

private:
  std::uint64_t state_[4];
};

namespace rng_tags {
inline constexpr std::uint64_t sample = 0x53414d504c45ull;    // DGP sample draws
inline constexpr std::uint64_t bootstrap = 0x424f4f5453ull;   // multiplier weights
inline constexpr std::uint64_t generic = 0x47454e4552ull;     // tests, misc
} // namespace rng_tags

} // namespace uniband
