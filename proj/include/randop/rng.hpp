#pragma once

#include <array>
#include <cstdint>

namespace randop {

// Philox4x32-10 block function (Salmon et al., SC'11). Stateless: every
// output is a pure function of (key, counter), so per-site draws do not depend
// on the order in which sites or realizations are visited.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Provenance of one disorder realization.
struct SeedRecord {
  std::uint64_t master_seed = 0;
  std::uint64_t realization = 0;

  friend bool operator==(const SeedRecord&, const SeedRecord&) = default;
};

// Counter-based uniform stream keyed by a 64-bit seed. uniform(a, b) maps the
// pair (a, b) to a double in [0, 1) using 53 random bits.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  double uniform(std::uint64_t a, std::uint64_t b) const;
  std::array<std::uint32_t, 4> block(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
};

// Derives an independent key for an auxiliary stream (random test triples,
// synthetic point processes) so it never overlaps the potential stream.
std::uint64_t derive_key(std::uint64_t master_seed, std::uint64_t domain);

}  // namespace randop
