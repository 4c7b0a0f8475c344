#include "sharpq/kernel.hpp"

#include <cmath>

#include "sharpq/errors.hpp"

namespace sharpq {

BlurKernel::BlurKernel(int size, std::vector<double> weights)
    : size_(size), weights_(std::move(weights)) {
    if (size_ < 1 || size_ % 2 == 0) {
        throw ParameterError("kernel size must be odd and >= 1, got " + std::to_string(size_));
    }
    if (weights_.size() != static_cast<std::size_t>(size_) * size_) {
        throw ParameterError("kernel weight count does not match size");
    }
    double sum = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0)) { // also rejects NaN
            throw ParameterError("kernel weights must be non-negative");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw ParameterError("kernel weights must sum to 1, got " + std::to_string(sum));
    }
}

BlurKernel BlurKernel::flipped() const {
    std::vector<double> rev(weights_.rbegin(), weights_.rend());
    return BlurKernel(size_, std::move(rev));
}

BlurKernel box_kernel(int k) {
    if (k < 1 || k % 2 == 0) {
        throw ParameterError("box kernel size must be odd and >= 1, got " + std::to_string(k));
    }
    const std::size_t n = static_cast<std::size_t>(k) * k;
    // Every weight is exactly 1/K^2; the sum then lands within a few ulp
    // of 1, inside the kernel invariant's 1e-12 tolerance.
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    return BlurKernel(k, std::move(w));
}

BlurKernel gaussian_kernel(int k, double sigma) {
    if (k < 1 || k % 2 == 0) {
        throw ParameterError("gaussian kernel size must be odd and >= 1, got " + std::to_string(k));
    }
    if (!(sigma > 0.0)) {
        throw ParameterError("gaussian sigma must be positive");
    }
    const int r = k / 2;
    std::vector<double> w(static_cast<std::size_t>(k) * k);
    double sum = 0.0;
    for (int y = -r; y <= r; ++y) {
        for (int x = -r; x <= r; ++x) {
            double v = std::exp(-(static_cast<double>(x) * x + static_cast<double>(y) * y) /
                                (2.0 * sigma * sigma));
            w[static_cast<std::size_t>(y + r) * k + (x + r)] = v;
            sum += v;
        }
    }
    for (double& v : w) v /= sum;
    return BlurKernel(k, std::move(w));
}

BlurKernel KernelSpec::make() const {
    return type == Type::box ? box_kernel(k) : gaussian_kernel(k, sigma);
}

KernelSpec KernelSpec::parse(const std::string& text) {
    const auto first = text.find(':');
    if (first == std::string::npos) {
        throw ParameterError("kernel spec must look like box:K or gauss:K:sigma, got '" + text + "'");
    }
    const std::string name = text.substr(0, first);
    KernelSpec spec;
    try {
        if (name == "box") {
            spec.type = Type::box;
            spec.k = std::stoi(text.substr(first + 1));
        } else if (name == "gauss" || name == "gaussian") {
            const auto second = text.find(':', first + 1);
            if (second == std::string::npos) {
                throw ParameterError("gaussian kernel spec needs a sigma: gauss:K:sigma");
            }
            spec.type = Type::gaussian;
            spec.k = std::stoi(text.substr(first + 1, second - first - 1));
            spec.sigma = std::stod(text.substr(second + 1));
        } else {
            throw ParameterError("unknown kernel type '" + name + "'");
        }
    } catch (const std::invalid_argument&) {
        throw ParameterError("malformed kernel spec '" + text + "'");
    } catch (const std::out_of_range&) {
        throw ParameterError("kernel spec value out of range in '" + text + "'");
    }
    spec.make(); // validate k/sigma now so errors name the spec
    return spec;
}

} // namespace sharpq
