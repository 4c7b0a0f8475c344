#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sharpq/image.hpp"
#include "sharpq/q_metric.hpp"

namespace sharpq {

/// Cap applied to PSNR so reports stay finite and sortable.
inline constexpr double kPsnrCap = 99.0;

/// 10*log10(1/MSE) for [0,1]-ranged images (peak 1.0), capped at 99 dB.
double psnr(const LumaImage& a, const LumaImage& b);

/// Single-scale SSIM, 11x11 Gaussian window sigma=1.5, K1=0.01, K2=0.03,
/// dynamic range 1.0, averaged over valid (fully inside) window positions.
/// Requires min(width, height) >= 11.
double ssim(const LumaImage& a, const LumaImage& b);

/// One evaluated restored/reference pair.
struct MetricRecord {
    std::string image_id; ///< restored path as given
    double psnr = 0.0;
    double ssim = 0.0;
    double q = 0.0;       ///< no-reference, restored image only
    double wall_time = 0.0; ///< seconds; never serialized (reports stay byte-stable)
};

struct EvalReport {
    std::vector<MetricRecord> records;
    QConfig q_cfg;
    double mean_psnr = 0.0;
    double mean_ssim = 0.0;
    double mean_q = 0.0;
};

/// Loads every (restored, reference) pair, computes PSNR/SSIM between them
/// and Q of the restored image, and aggregates arithmetic means. Any
/// unloadable pair aborts with an error naming it; order is preserved.
EvalReport evaluate_pairs(const std::vector<std::pair<std::string, std::string>>& pairs,
                          const QConfig& q_cfg);

/// JSON document for an evaluation report. Wall times are intentionally
/// omitted so repeated runs produce byte-identical files.
std::string eval_report_to_json(const EvalReport& report);

/// Parses a pairs CSV with header "restored,reference".
std::vector<std::pair<std::string, std::string>> read_pairs_csv(const std::string& path);

} // namespace sharpq
