#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sharpq {

/// Square normalized blur kernel. Side length is odd, weights are
/// non-negative and sum to 1 (within 1e-12).
class BlurKernel {
public:
    BlurKernel(int size, std::vector<double> weights);

    int size() const { return size_; }
    int radius() const { return size_ / 2; }

    /// Weight at kernel column kx, row ky (0-based).
    double at(int kx, int ky) const { return weights_[static_cast<std::size_t>(ky) * size_ + kx]; }

    const std::vector<double>& weights() const { return weights_; }

    /// Kernel rotated by 180 degrees.
    BlurKernel flipped() const;

private:
    int size_;
    std::vector<double> weights_;
};

/// Uniform averaging kernel, all weights 1/K^2. K must be odd and >= 1.
BlurKernel box_kernel(int k);

/// Gaussian kernel sampled at integer offsets from the center and
/// normalized to sum 1. K must be odd, sigma > 0.
BlurKernel gaussian_kernel(int k, double sigma);

/// Textual kernel description used by the CLI and by JSON configs,
/// e.g. "box:5" or "gauss:7:1.5".
struct KernelSpec {
    enum class Type { box, gaussian };

    Type type = Type::box;
    int k = 5;
    double sigma = 1.0; // gaussian only

    BlurKernel make() const;

    /// Parses "box:K" or "gauss:K:sigma" (also accepts "gaussian:K:sigma").
    static KernelSpec parse(const std::string& text);
};

} // namespace sharpq
