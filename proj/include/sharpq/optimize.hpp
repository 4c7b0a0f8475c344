#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sharpq/image.hpp"
#include "sharpq/losses.hpp"

namespace sharpq {

enum class FidelityMode { direct, deconv };
enum class InitMode { observed, zeros };

struct OptimizerConfig {
    double step_size = 1e-2;
    int max_iters = 500;
    FidelityMode fidelity = FidelityMode::direct;
    std::optional<BlurKernel> kernel; ///< required in deconv mode
    double tol = 1e-7;                ///< relative loss-change stopping threshold
    InitMode init = InitMode::observed;

    void validate() const;
};

struct TraceRecord {
    int iter = 0;
    double total_loss = 0.0;
    double l1_term = 0.0;
    double q_term = 0.0;  ///< beta * (-q_value)
    double q_value = 0.0;
};

struct OptTrace {
    std::vector<TraceRecord> records;
};

struct DeblurResult {
    LumaImage image;
    OptTrace trace;
};

/// Pixel-space gradient descent on the composite objective. The fidelity
/// anchor is the observed image itself (direct mode) or its reblur
/// (deconv mode, back-propagated through the true convolution adjoint).
/// Reported loss values use the exact mean-L1 data term; descent uses its
/// Charbonnier smoothing. Stops after max_iters or when the relative loss
/// change drops below tol.
DeblurResult variational_deblur(const LumaImage& observed, const LossConfig& loss,
                                const OptimizerConfig& opt);

/// Classical multiplicative deconvolution baseline,
/// x <- x * ((observed / (x*H)) * H_flipped), reflect boundary,
/// initialized at the observed image. If any observed sample is <= 0 the
/// input is shifted by +1e-6 first.
LumaImage richardson_lucy(const LumaImage& observed, const BlurKernel& kernel, int iters);

/// CSV export, header "iter,total_loss,l1_term,q_term,q_value".
void write_trace_csv(const OptTrace& trace, const std::string& path);

} // namespace sharpq
