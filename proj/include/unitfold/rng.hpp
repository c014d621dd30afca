#pragma once

#include <cstdint>
#include <random>

namespace unitfold {

// Deterministic generator chain: mt19937_64 -> open-interval uniforms ->
// polar-method normals -> squeeze-accept gamma variates.  The same seed
// reproduces the same stream on every platform, which std::gamma_distribution
// does not guarantee.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform on the open interval (0, 1).
    double uniform() {
        return (static_cast<double>(eng_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    double normal();

    // Gamma(shape, rate); shapes below 1 are boosted through Gamma(shape+1)
    // and a power of an extra uniform.
    double gamma(double shape, double rate);

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace unitfold
