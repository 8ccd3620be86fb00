#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <vector>

namespace mtsf {

/// Names an independent random stream: a master seed plus a path such as
/// (replicate id, pair id, purpose tag). Equal seeds give equal streams.
struct RngSeed {
  std::uint64_t master = 0;
  std::vector<std::uint64_t> path;

  RngSeed() = default;
  explicit RngSeed(std::uint64_t master_seed, std::vector<std::uint64_t> stream_path = {})
      : master(master_seed), path(std::move(stream_path)) {}

  /// The same seed with one more path component.
  RngSeed child(std::uint64_t component) const;
  RngSeed child(std::initializer_list<std::uint64_t> components) const;

  bool operator==(const RngSeed&) const = default;
};

/// Purpose tags used as the last path component.
namespace stream {
inline constexpr std::uint64_t simulate = 1;
inline constexpr std::uint64_t thinning = 2;
inline constexpr std::uint64_t field = 3;
inline constexpr std::uint64_t replicate = 4;
inline constexpr std::uint64_t cv = 5;
}  // namespace stream

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Counter-based generator. Satisfies UniformRandomBitGenerator, so it works
/// with the <random> distributions. The key is derived from the whole seed;
/// the counter walks from zero.
class Philox {
 public:
  using result_type = std::uint64_t;

  explicit Philox(const RngSeed& seed);
  Philox(std::array<std::uint32_t, 2> key, std::uint64_t start_block = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform double in (0, 1).
  double uniform_open();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
};

}  // namespace mtsf
