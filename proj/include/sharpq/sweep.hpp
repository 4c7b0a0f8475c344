#pragma once

#include <string>
#include <vector>

#include "sharpq/image.hpp"
#include "sharpq/losses.hpp"
#include "sharpq/optimize.hpp"

namespace sharpq {

/// Aggregate metrics of one beta setting across the input set.
struct SweepRecord {
    double beta = 0.0;
    double mean_psnr = 0.0;
    double mean_ssim = 0.0;
    double mean_q = 0.0;
};

/// Runs variational_deblur per (observed image, beta), evaluates each
/// restored image against its reference after the 8-bit export round trip,
/// and aggregates per beta. loss.beta is overridden by each sweep value.
std::vector<SweepRecord> beta_sweep(const std::vector<LumaImage>& observed,
                                    const std::vector<LumaImage>& references,
                                    const std::vector<double>& betas,
                                    const LossConfig& loss, const OptimizerConfig& opt);

/// CSV export, header "beta,mean_psnr,mean_ssim,mean_q".
void write_sweep_csv(const std::vector<SweepRecord>& records, const std::string& path);

} // namespace sharpq
