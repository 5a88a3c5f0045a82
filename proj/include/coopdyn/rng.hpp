#pragma once

#include <cstdint>
#include <span>

namespace coopdyn {

/// Counter-based random stream. Output k of a stream is a fixed function of
/// (key, k), so a stream can be split into independent children by index and
/// any parallel decomposition reproduces the serial draw bit for bit.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;
  /// Index drawn from the discrete law given by `weights` (need not be
  /// normalized; must be nonnegative with a positive sum).
  std::size_t categorical(std::span<const double> weights) noexcept;

  /// Child stream for `index`. Children of distinct indices are independent
  /// of each other and of the parent's own output.
  RngStream split(std::uint64_t index) const noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  RngStream(std::uint64_t key, std::uint64_t counter, bool) noexcept : key_(key), counter_(counter) {}
  std::uint64_t key_;
  std::uint64_t counter_;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace coopdyn
