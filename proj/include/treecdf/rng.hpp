#pragma once

#include <cstddef>
#include <cstdint>

namespace treecdf {

// Substream labels. Every random draw in the library comes from a stream
// keyed by (seed, label, index...), so unrelated stages never share state:
// growing a larger ensemble does not perturb jitter or sampling streams.
enum class Stream : std::uint64_t {
    tree_fit = 1,
    jitter = 2,
    sampling = 3,
    cv_shuffle = 4,
    scenario = 5,
    monte_carlo = 6,
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t stream_key(std::uint64_t seed, Stream s, std::uint64_t a = 0,
                         std::uint64_t b = 0);

// Counter-based generator: the i-th output is a hash of (key, i).
// Distinct keys give independent streams; a fixed key gives a reproducible
// sequence regardless of what other streams consumed.
class Rng {
  public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t key) : state_(key) {}
    Rng(std::uint64_t seed, Stream s, std::uint64_t a = 0, std::uint64_t b = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() { return next_u64(); }

    std::uint64_t next_u64();

    double next_unit_co();  // uniform on [0, 1)
    double next_unit_oc();  // uniform on (0, 1]
    double next_unit_oo();  // uniform on (0, 1)
    double next_normal();   // standard normal, Box-Muller with pair caching
    std::size_t next_index(std::size_t n);  // uniform on {0, ..., n-1}

  private:
    std::uint64_t state_;
    bool have_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

}  // namespace treecdf
