#include "treecdf/rng.hpp"

#include <cmath>

namespace treecdf {

namespace {
constexpr std::uint64_t kWeyl = 0x9e3779b97f4a7c15ULL;
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

std::uint64_t mix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_key(std::uint64_t seed, Stream s, std::uint64_t a,
                         std::uint64_t b) {
    std::uint64_t k = mix64(seed + kWeyl);
    k = mix64(k ^ (static_cast<std::uint64_t>(s) + kWeyl));
    k = mix64(k ^ (a + kWeyl));
    k = mix64(k ^ (b + kWeyl));
    return k;
}

Rng::Rng(std::uint64_t seed, Stream s, std::uint64_t a, std::uint64_t b)
    : state_(stream_key(seed, s, a, b)) {}

std::uint64_t Rng::next_u64() {
    state_ += kWeyl;
    return mix64(state_);
}

double Rng::next_unit_co() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_unit_oc() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double Rng::next_unit_oo() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::next_normal() {
    if (have_cached_normal_) {
        have_cached_normal_ = false;
        return cached_normal_;
    }
    const double u1 = next_unit_oc();
    const double u2 = next_unit_co();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = kTwoPi * u2;
    cached_normal_ = radius * std::sin(angle);
    have_cached_normal_ = true;
    return radius * std::cos(angle);
}

std::size_t Rng::next_index(std::size_t n) {
    // Lemire multiply-shift; bias is negligible for n << 2^64.
    return static_cast<std::size_t>(
        (static_cast<__uint128_t>(next_u64()) * n) >> 64);
}

}  // namespace treecdf
