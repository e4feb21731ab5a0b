#ifndef HETREG_RNG_HPP
#define HETREG_RNG_HPP

#include <cstdint>

#include <Eigen/Core>

namespace hetreg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

// Counter-based splittable generator. Each draw hashes
// (master_seed, stream_index, counter), so streams can be handed to worker
// threads without locking and any draw is reproducible from the three fields.
struct RngStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
  std::uint64_t counter = 0;
  std::uint64_t key = 0;  // cached mix of (master_seed, stream_index)
};

// MurmurHash3 64-bit finalizer; full-avalanche bijection on u64.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 33;
  z *= 0xff51afd7ed558ccdULL;
  z ^= z >> 33;
  z *= 0xc4ceb9fe1a85ec53ULL;
  z ^= z >> 33;
  return z;
}

RngStream make_stream(std::uint64_t master_seed, std::uint64_t stream_index);

std::uint64_t next_u64(RngStream& stream);

// Uniform draw in (0, 1] with 53-bit resolution.
double next_uniform(RngStream& stream);

// One standard normal draw (Box-Muller, two uniforms per draw).
double next_normal(RngStream& stream);

// count i.i.d. N(0,1) draws; count must be >= 1.
Vec std_normal(RngStream& stream, Index count);

}  // namespace hetreg

#endif  // HETREG_RNG_HPP
