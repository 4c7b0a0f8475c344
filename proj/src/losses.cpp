#include "sharpq/losses.hpp"

#include <cmath>

#include "sharpq/errors.hpp"
#include "sharpq/q_autograd.hpp"

namespace sharpq {

void LossConfig::validate() const {
    if (!(beta >= 0.0)) throw ParameterError("beta must be >= 0");
    if (!(l1_delta > 0.0)) throw ParameterError("l1_delta must be positive");
    q_cfg.validate();
}

double l1_loss(const LumaImage& pred, const LumaImage& gt) {
    if (!pred.same_shape(gt)) {
        throw DimensionError("l1_loss shape mismatch");
    }
    const std::int64_t n = static_cast<std::int64_t>(pred.size());
    const int h = pred.height();
    const int w = pred.width();
    std::vector<double> row_sums(h, 0.0);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        double s = 0.0;
        for (int x = 0; x < w; ++x) s += std::abs(pred.at(x, y) - gt.at(x, y));
        row_sums[y] = s;
    }
    double total = 0.0;
    for (double s : row_sums) total += s; // fixed order
    return total / static_cast<double>(n);
}

CompositeValue composite_loss(const LumaImage& pred, const LumaImage& gt,
                              const LossConfig& cfg) {
    cfg.validate();
    CompositeValue v;
    v.l1_term = l1_loss(pred, gt);
    if (cfg.beta == 0.0) {
        // Sharpness term skipped entirely: the total bit-equals l1_loss.
        v.total = v.l1_term;
        return v;
    }
    v.q_value = compute_q(pred, cfg.q_cfg).q;
    v.total = v.l1_term + cfg.beta * (-v.q_value);
    return v;
}

GradientField composite_grad(const LumaImage& pred, const LumaImage& gt,
                             const LossConfig& cfg) {
    cfg.validate();
    if (!pred.same_shape(gt)) {
        throw DimensionError("composite_grad shape mismatch");
    }
    const double inv_n = 1.0 / static_cast<double>(pred.size());
    const double d2 = cfg.l1_delta * cfg.l1_delta;
    GradientField out(pred.width(), pred.height());
    const std::int64_t total = static_cast<std::int64_t>(pred.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < total; ++i) {
        const double r = pred[i] - gt[i];
        out[i] = inv_n * r / std::sqrt(r * r + d2);
    }
    if (cfg.beta > 0.0) {
        const GradientField qg = q_gradient(pred, cfg.q_cfg);
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < total; ++i) {
            out[i] -= cfg.beta * qg[i];
        }
    }
    return out;
}

} // namespace sharpq
