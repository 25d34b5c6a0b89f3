#include "pruw/rng.hpp"

#include <stdexcept>

namespace pruw {

namespace {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::string_view label,
                     std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = mix(seed ^ fnv1a(label));
  s = mix(s ^ mix(a));
  state_ = mix(s ^ mix(b));
}

std::uint64_t RngStream::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t RngStream::uniform_below(std::uint64_t bound) {
  if (bound == 0) {
    throw std::invalid_argument("uniform_below: bound must be positive");
  }
  // Rejection sampling: accept draws below the largest multiple of bound.
  std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
  std::uint64_t v = next_u64();
  while (v >= limit) {
    v = next_u64();
  }
  return v % bound;
}

std::vector<std::uint64_t> RngStream::field_vector(std::uint64_t q,
                                                   std::size_t len) {
  std::vector<std::uint64_t> out(len);
  for (auto& x : out) {
    x = field_element(q);
  }
  return out;
}

}  // namespace pruw
