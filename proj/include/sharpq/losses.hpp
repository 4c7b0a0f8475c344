#pragma once

#include "sharpq/image.hpp"
#include "sharpq/q_metric.hpp"

namespace sharpq {

/// Configuration of the sharpness-augmented composite loss.
struct LossConfig {
    double beta = 0.0;       ///< weight of the negative-sharpness term
    QConfig q_cfg;           ///< Q evaluation knobs
    double l1_delta = 1e-3;  ///< Charbonnier smoothing used only in gradients

    void validate() const;
};

/// Mean absolute error (1/N) * sum |pred - gt|.
double l1_loss(const LumaImage& pred, const LumaImage& gt);

struct CompositeValue {
    double total = 0.0;
    double l1_term = 0.0;
    double q_value = 0.0;
};

/// total = l1_loss(pred, gt) + beta * (-Q(pred)). With beta == 0 the
/// sharpness term is skipped entirely, so the total bit-equals l1_loss.
CompositeValue composite_loss(const LumaImage& pred, const LumaImage& gt, const LossConfig& cfg);

/// Per-pixel gradient of the composite loss. The L1 term is smoothed with
/// Charbonnier sqrt(r^2 + delta^2) (the true sign subgradient stalls
/// descent near zero residual); reported loss values stay unsmoothed.
/// field = (1/N) * r / sqrt(r^2 + delta^2) + beta * (-dQ/dpixel).
GradientField composite_grad(const LumaImage& pred, const LumaImage& gt, const LossConfig& cfg);

} // namespace sharpq
