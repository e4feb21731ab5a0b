#include "hetreg/rng.hpp"

#include <cmath>

#include "hetreg/errors.hpp"

namespace hetreg {

RngStream make_stream(std::uint64_t master_seed, std::uint64_t stream_index) {
  RngStream s;
  s.master_seed = master_seed;
  s.stream_index = stream_index;
  s.counter = 0;
  s.key = mix64(stream_index ^ mix64(master_seed ^ 0x6a09e667f3bcc909ULL));
  return s;
}

std::uint64_t next_u64(RngStream& stream) {
  return mix64(stream.key ^ mix64(stream.counter++ ^ 0xbb67ae8584caa73bULL));
}

double next_uniform(RngStream& stream) {
  // (x >> 11) + 1 spans 1..2^53, so the result lies in (0, 1].
  return static_cast<double>((next_u64(stream) >> 11) + 1) * 0x1.0p-53;
}

double next_normal(RngStream& stream) {
  constexpr double two_pi = 6.283185307179586476925286766559;
  const double u1 = next_uniform(stream);
  const double u2 = static_cast<double>(next_u64(stream) >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

Vec std_normal(RngStream& stream, Index count) {
  if (count < 1) {
    throw invalid_argument_error("std_normal: count must be >= 1");
  }
  Vec out(count);
  for (Index i = 0; i < count; ++i) {
    out[i] = next_normal(stream);
  }
  return out;
}

}  // namespace hetreg
