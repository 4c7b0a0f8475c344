#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "sharpq/image.hpp"

namespace sharpq {

/// Out-of-focus degradation recipe: blur kernel, additive Gaussian noise
/// level sigma_e (in [0,1] sample units), and the RNG seed.
struct DegradationConfig {
    KernelSpec kernel;
    double sigma_e = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Deterministic standard-normal sampler: mt19937_64 (bit-exact across
/// platforms per the C++ standard) driving the Box-Muller cosine branch.
/// Each draw consumes exactly two 53-bit uniforms.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}

    double next();

private:
    double uniform01(); // [0, 1)
    std::mt19937_64 engine_;
};

/// Applies the degradation model: blur-kernel convolution plus i.i.d.
/// Gaussian noise N(0, sigma_e^2) from the seeded generator. The noise
/// stream is consumed in row-major order; the output is not clamped.
LumaImage degrade(const LumaImage& img, const DegradationConfig& cfg);

/// JSON round trip for the config:
/// {"kernel": {"type": "box"|"gaussian", "k": int, "sigma": real?},
///  "sigma_e": real, "seed": int}
std::string degradation_config_to_json(const DegradationConfig& cfg);
DegradationConfig degradation_config_from_json(const std::string& text);

} // namespace sharpq
