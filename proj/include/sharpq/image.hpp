#pragma once

#include <cstddef>
#include <vector>

#include "sharpq/kernel.hpp"

namespace sharpq {

/// Single-channel real-valued image, row-major, nominal range [0,1].
/// Values may leave the nominal range during optimization; clamping
/// happens only at raster export.
class LumaImage {
public:
    LumaImage() = default;
    LumaImage(int width, int height, double fill = 0.0);
    LumaImage(int width, int height, std::vector<double> samples);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return samples_.size(); }

    double& at(int x, int y) { return samples_[static_cast<std::size_t>(y) * width_ + x]; }
    double at(int x, int y) const { return samples_[static_cast<std::size_t>(y) * width_ + x]; }

    double& operator[](std::size_t i) { return samples_[i]; }
    double operator[](std::size_t i) const { return samples_[i]; }

    std::vector<double>& samples() { return samples_; }
    const std::vector<double>& samples() const { return samples_; }

    bool same_shape(const LumaImage& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> samples_;
};

/// Per-pixel derivative of a scalar quantity with respect to the image,
/// shaped exactly like its source image.
using GradientField = LumaImage;

/// Horizontal and vertical gradient fields of an image.
struct GradientPair {
    LumaImage gx;
    LumaImage gy;
};

/// Top-left corner of a non-overlapping analysis patch.
struct PatchOrigin {
    int x = 0;
    int y = 0;
};

/// Central differences in the interior, one-sided difference / 2 at the
/// borders (replicate padding). Requires width >= 2 and height >= 2.
GradientPair spatial_gradients(const LumaImage& img);

/// Transpose of the spatial_gradients stencil: folds a pair of gradient
/// fields back into pixel space. Used by the analytic Q gradient.
GradientField gradient_adjoint(const GradientPair& g);

/// Non-overlapping d x d tiles anchored at (0,0), row-major order.
/// Partial tiles at the right/bottom edges are discarded. d >= 2.
/// A patch size exceeding the image yields an empty sequence.
std::vector<PatchOrigin> extract_patches(const LumaImage& img, int d);

/// 2-D correlation with reflect boundary handling (mirror without
/// repeating the edge sample). Output has the input's size.
LumaImage convolve(const LumaImage& img, const BlurKernel& kernel);

/// True transpose of convolve under the same boundary rule, required to
/// back-propagate through the deconvolution fidelity term. Note this is
/// not the same operator as convolving with the flipped kernel: the
/// reflect boundary makes the forward matrix non-symmetric at the edges.
LumaImage convolve_adjoint(const LumaImage& img, const BlurKernel& kernel);

/// Reflect-101 index fold for boundary handling.
int reflect_index(int i, int n);

} // namespace sharpq
