#include "hklab/rng.hpp"

#include <cmath>

namespace hklab {

std::uint64_t Rng::below(std::uint64_t n) {
    if (n <= 1) return 0;
    // rejection from the top to remove modulo bias
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

double Rng::exponential(double mean) {
    return -mean * std::log(uniform01());
}

}  // namespace hklab
