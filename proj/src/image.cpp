#include "sharpq/image.hpp"

#include <string>

#include "sharpq/errors.hpp"

namespace sharpq {

LumaImage::LumaImage(int width, int height, double fill)
    : width_(width), height_(height) {
    if (width < 1 || height < 1) {
        throw ParameterError("image dimensions must be >= 1, got " + std::to_string(width) + "x" +
                             std::to_string(height));
    }
    samples_.assign(static_cast<std::size_t>(width) * height, fill);
}

LumaImage::LumaImage(int width, int height, std::vector<double> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
    if (width < 1 || height < 1) {
        throw ParameterError("image dimensions must be >= 1");
    }
    if (samples_.size() != static_cast<std::size_t>(width) * height) {
        throw DimensionError("sample count " + std::to_string(samples_.size()) +
                             " does not match " + std::to_string(width) + "x" +
                             std::to_string(height));
    }
}

int reflect_index(int i, int n) {
    if (n == 1) return 0;
    while (i < 0 || i >= n) {
        if (i < 0) i = -i;
        if (i >= n) i = 2 * n - 2 - i;
    }
    return i;
}

GradientPair spatial_gradients(const LumaImage& img) {
    const int w = img.width();
    const int h = img.height();
    if (w < 2 || h < 2) {
        throw DimensionError("spatial_gradients needs at least 2x2, got " + std::to_string(w) +
                             "x" + std::to_string(h));
    }
    GradientPair out{LumaImage(w, h), LumaImage(w, h)};
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int xm = x > 0 ? x - 1 : 0;
            const int xp = x < w - 1 ? x + 1 : w - 1;
            const int ym = y > 0 ? y - 1 : 0;
            const int yp = y < h - 1 ? y + 1 : h - 1;
            out.gx.at(x, y) = (img.at(xp, y) - img.at(xm, y)) / 2.0;
            out.gy.at(x, y) = (img.at(x, yp) - img.at(x, ym)) / 2.0;
        }
    }
    return out;
}

GradientField gradient_adjoint(const GradientPair& g) {
    const int w = g.gx.width();
    const int h = g.gx.height();
    if (!g.gx.same_shape(g.gy)) {
        throw DimensionError("gradient pair shape mismatch");
    }
    GradientField out(w, h);
    // Gather form of the stencil transpose: each output pixel collects the
    // terms of every forward difference that read it. Disjoint writes keep
    // the loop bit-deterministic under any thread count.
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double v = 0.0;
            if (x > 0) v += g.gx.at(x - 1, y) / 2.0;
            if (x < w - 1) v -= g.gx.at(x + 1, y) / 2.0;
            if (x == w - 1) v += g.gx.at(x, y) / 2.0;
            if (x == 0) v -= g.gx.at(x, y) / 2.0;
            if (y > 0) v += g.gy.at(x, y - 1) / 2.0;
            if (y < h - 1) v -= g.gy.at(x, y + 1) / 2.0;
            if (y == h - 1) v += g.gy.at(x, y) / 2.0;
            if (y == 0) v -= g.gy.at(x, y) / 2.0;
            out.at(x, y) = v;
        }
    }
    return out;
}

std::vector<PatchOrigin> extract_patches(const LumaImage& img, int d) {
    if (d < 2) {
        throw ParameterError("patch size must be >= 2, got " + std::to_string(d));
    }
    const int nx = img.width() / d;
    const int ny = img.height() / d;
    std::vector<PatchOrigin> origins;
    origins.reserve(static_cast<std::size_t>(nx) * ny);
    for (int py = 0; py < ny; ++py) {
        for (int px = 0; px < nx; ++px) {
            origins.push_back({px * d, py * d});
        }
    }
    return origins;
}

LumaImage convolve(const LumaImage& img, const BlurKernel& kernel) {
    const int w = img.width();
    const int h = img.height();
    const int r = kernel.radius();
    LumaImage out(w, h);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double sum = 0.0;
            for (int ky = -r; ky <= r; ++ky) {
                const int yy = reflect_index(y + ky, h);
                for (int kx = -r; kx <= r; ++kx) {
                    const int xx = reflect_index(x + kx, w);
                    sum += kernel.at(kx + r, ky + r) * img.at(xx, yy);
                }
            }
            out.at(x, y) = sum;
        }
    }
    return out;
}

LumaImage convolve_adjoint(const LumaImage& img, const BlurKernel& kernel) {
    const int w = img.width();
    const int h = img.height();
    const int r = kernel.radius();
    LumaImage out(w, h);
    // Transpose of the forward operator: every forward output scatters its
    // weighted value back to the source pixels it read, reflected indices
    // included. Serial scatter; the reflect folds make target rows overlap
    // so a row-parallel version would race.
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double v = img.at(x, y);
            for (int ky = -r; ky <= r; ++ky) {
                const int yy = reflect_index(y + ky, h);
                for (int kx = -r; kx <= r; ++kx) {
                    const int xx = reflect_index(x + kx, w);
                    out.at(xx, yy) += kernel.at(kx + r, ky + r) * v;
                }
            }
        }
    }
    return out;
}

} // namespace sharpq
