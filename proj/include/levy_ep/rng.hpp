#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace levy_ep {

/// splitmix64 finalizer, used to derive decorrelated seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Random stream with platform-independent variate transforms.
///
/// The std:: distributions are implementation-defined, so uniforms, normals
/// and exponentials are produced here from raw 64-bit engine output. This keeps
/// every Monte Carlo output a pure function of (seed, stream ids).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  /// Independent stream for a (master seed, a, b) triple, e.g. (seed, n, path).
  static Rng substream(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    return Rng(mix64(mix64(master) ^ mix64(a + 0x632be59bd9b4e019ULL) ^
                     mix64(b + 0x85157af5ULL)));
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  /// Standard normal via the Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace levy_ep
