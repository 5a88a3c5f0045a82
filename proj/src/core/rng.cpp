#include "coopdyn/rng.hpp"

namespace coopdyn {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

RngStream::RngStream(std::uint64_t seed) noexcept : key_(mix64(seed + kGolden)), counter_(0) {}

std::uint64_t RngStream::next_u64() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double RngStream::uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t RngStream::below(std::uint64_t n) noexcept {
  // Lemire's multiply-shift; the bias is below 2^-64 * n and irrelevant here.
  __extension__ using u128 = unsigned __int128;
  const u128 product = static_cast<u128>(next_u64()) * n;
  return static_cast<std::uint64_t>(product >> 64);
}

std::size_t RngStream::categorical(std::span<const double> weights) noexcept {
  double total = 0.0;
  for (double w : weights) total += w;
  const double u = uniform() * total;
  double acc = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    acc += weights[k];
    if (u < acc) return k;
  }
  // u landed in the rounding gap at the top end.
  for (std::size_t k = weights.size(); k-- > 0;)
    if (weights[k] > 0.0) return k;
  return 0;
}

RngStream RngStream::split(std::uint64_t index) const noexcept {
  const std::uint64_t child = mix64(key_ ^ mix64(index * kGolden + 0x632BE59BD9B4E019ULL));
  return RngStream(child, 0, true);
}

}  // namespace coopdyn
