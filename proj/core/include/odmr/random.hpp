#pragma once

#include <array>
#include <cstdint>

namespace odmr {

// Philox4x32 with 10 rounds (Salmon et al., "Parallel random numbers: as easy
// as 1, 2, 3"). A keyed bijection of a 128-bit counter; any draw can be
// addressed directly by its counter, independent of evaluation order.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

// Maps 64 random bits to a double strictly inside (0, 1) with 52-bit resolution.
double to_open_unit(std::uint64_t bits) noexcept;

// Parameter tags separating the independent draws made for one center.
enum class DrawTag : std::uint32_t {
  zero_field = 1,
  strain_e1 = 2,
  strain_e2 = 3,
  field_component = 4,
  field_value = 5,
  axis_class = 6,
  drive = 7,
};

// Sequence of uniforms addressed by (seed, index, tag). The k-th value is a
// pure function of those plus k, so draws for different centers or
// parameters never interact.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t index, DrawTag tag) noexcept;

  double next() noexcept;

 private:
  PhiloxKey key_;
  std::uint64_t index_;
  std::uint32_t tag_;
  std::uint32_t block_ = 0;
  PhiloxCounter buffer_{};
  int used_ = 2;  // doubles consumed from buffer_
};

}  // namespace odmr
