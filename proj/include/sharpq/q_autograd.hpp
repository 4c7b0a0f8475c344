#pragma once

#include <cstdint>

#include "sharpq/image.hpp"
#include "sharpq/q_metric.hpp"

namespace sharpq {

/// Outcome of comparing the analytic Q gradient against finite differences.
struct GradCheckReport {
    double max_rel_err = 0.0;
    double mean_rel_err = 0.0;
    std::int64_t n_sites_checked = 0;
    std::int64_t n_sites_skipped_degenerate = 0;
    double fd_step = 0.0;
};

/// Analytic per-pixel gradient dQ/dI via the chain rule through the patch
/// pipeline (tensor -> eigenvalues -> singular values -> coherence -> Qi)
/// and the transpose of the gradient stencil. Isotropic patches contribute
/// exactly zero. Degenerate patches (s1+s2 < eps or s1-s2 < eps) contribute
/// zero; when only s2 < eps the lambda2 branch is zeroed and the lambda1
/// branch is kept, so strong edges still drive the gradient.
GradientField q_gradient(const LumaImage& img, const QConfig& cfg = {});

/// Brute-force central-difference gradient, (Q(I+h*e) - Q(I-h*e)) / 2h per
/// pixel. Costs one pair of full Q evaluations per pixel; verification only.
GradientField fd_gradient(const LumaImage& img, const QConfig& cfg, double h);

/// Site-by-site comparison of q_gradient and fd_gradient. Sites whose
/// stencil neighborhood touches a patch within 10*h of the tau boundary,
/// or a degenerate patch, are excluded from the error statistics and
/// counted in n_sites_skipped_degenerate.
GradCheckReport check_gradient(const LumaImage& img, const QConfig& cfg, double h);

} // namespace sharpq
