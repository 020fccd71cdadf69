#include "posegen/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace posegen {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream RngStream::derive(std::uint64_t master_seed, std::string_view tag,
                            std::uint64_t index_a, std::uint64_t index_b) {
  // FNV-1a over the tag keeps purposes apart; indices are folded in through
  // the mixer one at a time.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t s = mix64(master_seed);
  s = mix64(s ^ h);
  s = mix64(s ^ index_a);
  s = mix64(s ^ (index_b + 0x632be59bd9b4e019ULL));
  return RngStream(s);
}

int RngStream::uniform_int(int lo, int hi) {
  if (hi < lo) {
    throw std::invalid_argument("uniform_int: empty range");
  }
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % span);
  std::uint64_t v = 0;
  do {
    v = engine_();
  } while (v >= limit);
  return lo + static_cast<int>(v % span);
}

double RngStream::normal() {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace posegen
