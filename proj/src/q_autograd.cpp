#include "sharpq/q_autograd.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sharpq/errors.hpp"

namespace sharpq {

namespace {

struct PatchPull {
    // dQ/d(a,b,c) for one patch, already scaled by 1/N. Zero for patches
    // that contribute nothing.
    double da = 0.0;
    double db = 0.0;
    double dc = 0.0;
    bool active = false;
};

// Chain rule Qi -> (s1, s2) -> (lambda1, lambda2) -> (a, b, c) for one
// anisotropic patch. The lambda2 branch is dropped when s2 < eps (the
// 1/(2 s2) factor diverges there; the subgradient-0 convention keeps the
// field finite). Whole patch drops out when the singular values coincide
// or both vanish: the derivative does not exist on that locus.
PatchPull pull_through_patch(const StructureTensor& t, const QConfig& cfg, double inv_n) {
    PatchPull pull;
    const SingularPair s = singular_values(t);
    const double ssum = s.s1 + s.s2;
    const double r = coherence(s.s1, s.s2, cfg.eps);
    if (r <= cfg.tau) return pull;                        // isotropic: Q locally constant
    if (ssum < cfg.eps || s.s1 - s.s2 < cfg.eps) return pull; // degenerate
    const double dq_ds1 = r + s.s1 * 2.0 * s.s2 / (ssum * ssum);
    const double dq_ds2 = -2.0 * s.s1 * s.s1 / (ssum * ssum);
    const double w1 = s.s1 > cfg.eps ? dq_ds1 / (2.0 * s.s1) : 0.0; // dQi/dlambda1
    const double w2 = s.s2 > cfg.eps ? dq_ds2 / (2.0 * s.s2) : 0.0; // dQi/dlambda2

    const double half_gap = (t.a - t.c) / 2.0;
    const double disc = std::sqrt(half_gap * half_gap + t.b * t.b);
    // disc >= (lambda1 - lambda2)/2 = (s1-s2)(s1+s2)/2 > 0 after the guards
    const double dl1_da = 0.5 + half_gap / (2.0 * disc);
    const double dl1_dc = 0.5 - half_gap / (2.0 * disc);
    const double dl1_db = t.b / disc;

    pull.da = (w1 * dl1_da + w2 * (1.0 - dl1_da)) * inv_n;
    pull.dc = (w1 * dl1_dc + w2 * (1.0 - dl1_dc)) * inv_n;
    pull.db = (w1 * dl1_db - w2 * dl1_db) * inv_n;
    pull.active = true;
    return pull;
}

} // namespace

GradientField q_gradient(const LumaImage& img, const QConfig& cfg) {
    cfg.validate();
    const auto origins = extract_patches(img, cfg.patch_size);
    if (origins.empty()) {
        throw EmptyDomainError("no full patch fits the image");
    }
    const GradientPair g = spatial_gradients(img);
    const double inv_n = 1.0 / static_cast<double>(origins.size());
    const int d = cfg.patch_size;

    GradientPair pulled{LumaImage(img.width(), img.height()),
                        LumaImage(img.width(), img.height())};
    const std::int64_t n = static_cast<std::int64_t>(origins.size());
    // Patch tiles are disjoint, so the writes below never collide.
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const PatchOrigin o = origins[i];
        StructureTensor t;
        for (int y = o.y; y < o.y + d; ++y) {
            for (int x = o.x; x < o.x + d; ++x) {
                const double vx = g.gx.at(x, y);
                const double vy = g.gy.at(x, y);
                t.a += vx * vx;
                t.b += vx * vy;
                t.c += vy * vy;
            }
        }
        const PatchPull pull = pull_through_patch(t, cfg, inv_n);
        if (!pull.active) continue;
        // d(a,b,c)/d(gx,gy) per pixel: a and c are quadratic, b bilinear.
        for (int y = o.y; y < o.y + d; ++y) {
            for (int x = o.x; x < o.x + d; ++x) {
                const double vx = g.gx.at(x, y);
                const double vy = g.gy.at(x, y);
                pulled.gx.at(x, y) = pull.da * 2.0 * vx + pull.db * vy;
                pulled.gy.at(x, y) = pull.db * vx + pull.dc * 2.0 * vy;
            }
        }
    }
    return gradient_adjoint(pulled);
}

GradientField fd_gradient(const LumaImage& img, const QConfig& cfg, double h) {
    cfg.validate();
    if (!(h > 0.0)) throw ParameterError("fd step must be positive");
    GradientField out(img.width(), img.height());
    const std::int64_t total = static_cast<std::int64_t>(img.size());
    // Each site perturbs a private copy of the image; entries land in
    // distinct slots so the loop stays deterministic.
#pragma omp parallel
    {
        LumaImage scratch = img;
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < total; ++i) {
            const double saved = scratch[i];
            scratch[i] = saved + h;
            const double q_plus = compute_q(scratch, cfg).q;
            scratch[i] = saved - h;
            const double q_minus = compute_q(scratch, cfg).q;
            scratch[i] = saved;
            out[i] = (q_plus - q_minus) / (2.0 * h);
        }
    }
    return out;
}

GradCheckReport check_gradient(const LumaImage& img, const QConfig& cfg, double h) {
    cfg.validate();
    if (!(h > 0.0)) throw ParameterError("fd step must be positive");
    const GradientField analytic = q_gradient(img, cfg);
    const GradientField fd = fd_gradient(img, cfg, h);
    const QReport report = compute_q(img, cfg);

    const int d = cfg.patch_size;
    const int nx = img.width() / d;
    const int ny = img.height() / d;
    // Patches where the branch could flip under the probe, or where the
    // eigen-chain is singular, make finite differences meaningless.
    std::vector<char> unstable(report.patches.size(), 0);
    for (std::size_t i = 0; i < report.patches.size(); ++i) {
        const PatchAnalysis& p = report.patches[i];
        const bool marginal = std::abs(p.r - cfg.tau) <= 10.0 * h;
        const bool degenerate =
            p.s1 + p.s2 < cfg.eps || p.s1 - p.s2 < cfg.eps || p.s2 < cfg.eps;
        unstable[i] = (marginal || degenerate) ? 1 : 0;
    }

    auto patch_unstable_at = [&](int x, int y) {
        if (x < 0 || y < 0 || x >= nx * d || y >= ny * d) return false; // outside all patches
        return unstable[static_cast<std::size_t>(y / d) * nx + (x / d)] != 0;
    };

    GradCheckReport out;
    out.fd_step = h;
    double sum_rel = 0.0;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            // A pixel reaches every patch its stencil neighborhood touches.
            static constexpr int kStencil[5][2] = {{0, 0}, {-1, 0}, {1, 0}, {0, -1}, {0, 1}};
            bool skip = false;
            for (const auto& s : kStencil) {
                if (patch_unstable_at(x + s[0], y + s[1])) skip = true;
            }
            if (skip) {
                ++out.n_sites_skipped_degenerate;
                continue;
            }
            ++out.n_sites_checked;
            const double a = analytic.at(x, y);
            const double f = fd.at(x, y);
            const double diff = std::abs(a - f);
            // below this both paths are numerically zero
            if (diff <= 1e-9) continue;
            const double rel = diff / std::max(std::abs(a), std::abs(f));
            sum_rel += rel;
            out.max_rel_err = std::max(out.max_rel_err, rel);
        }
    }
    if (out.n_sites_checked > 0) {
        out.mean_rel_err = sum_rel / static_cast<double>(out.n_sites_checked);
    }
    return out;
}

} // namespace sharpq
