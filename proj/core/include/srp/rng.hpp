#ifndef SRP_RNG_HPP
#define SRP_RNG_HPP

#include <cmath>
#include <cstdint>

namespace srp {

// Counter-based stream: output i is a hash of (key, i), the key a hash of
// (seed, replica). Replicas therefore get disjoint streams that can be drawn
// concurrently, and a (seed, replica) pair replays exactly. Reproducible
// within a build; not guaranteed bit-identical across platforms.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t replica = 0)
      : seed_(seed), replica_(replica), key_(derive_key(seed, replica)), counter_(0) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t replica() const { return replica_; }
  std::uint64_t counter() const { return counter_; }

  RngStream split(std::uint64_t child) const {
    return RngStream(mix64(key_ ^ mix64(child + 0x9E3779B97F4A7C15ull)), replica_);
  }

  std::uint64_t next_u64() { return mix64(key_ + 0x9E3779B97F4A7C15ull * ++counter_); }

  // uniform on [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform on (0, 1]
  double uniform_pos() { return 1.0 - uniform(); }

  // standard normal, Box-Muller (two counter draws per variate)
  double normal() {
    double u1 = uniform_pos();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.28318530717958647692 * u2);
  }

 private:
  static std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t replica) {
    std::uint64_t a = mix64(seed + 0x9E3779B97F4A7C15ull);
    std::uint64_t b = mix64(replica + 0xD1B54A32D192ED03ull);
    return mix64(a ^ (b + 0x9E3779B97F4A7C15ull + (a << 6) + (a >> 2)));
  }

  std::uint64_t seed_;
  std::uint64_t replica_;
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace srp

#endif
