#include "odmr/random.hpp"

namespace odmr {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline PhiloxCounter round(const PhiloxCounter& c, const PhiloxKey& k) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kMul0, c[0], hi0, lo0);
  mulhilo(kMul1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    counter = round(counter, key);
  }
  return counter;
}

double to_open_unit(std::uint64_t bits) noexcept {
  // (k + 0.5) / 2^52 for k in [0, 2^52); both ends stay exactly representable.
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t index, DrawTag tag) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      index_(index),
      tag_(static_cast<std::uint32_t>(tag)) {}

double CounterStream::next() noexcept {
  if (used_ == 2) {
    buffer_ = philox4x32_10({static_cast<std::uint32_t>(index_),
                             static_cast<std::uint32_t>(index_ >> 32), tag_, block_++},
                            key_);
    used_ = 0;
  }
  const std::uint64_t hi = buffer_[2 * used_];
  const std::uint64_t lo = buffer_[2 * used_ + 1];
  ++used_;
  return to_open_unit((hi << 32) | lo);
}

}  // namespace odmr
