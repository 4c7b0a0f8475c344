#include "sharpq/sweep.hpp"

#include <fstream>

#include "sharpq/detail/numfmt.hpp"
#include "sharpq/errors.hpp"
#include "sharpq/image_io.hpp"
#include "sharpq/metrics.hpp"

namespace sharpq {

std::vector<SweepRecord> beta_sweep(const std::vector<LumaImage>& observed,
                                    const std::vector<LumaImage>& references,
                                    const std::vector<double>& betas,
                                    const LossConfig& loss, const OptimizerConfig& opt) {
    if (betas.empty()) throw ParameterError("beta list must not be empty");
    if (observed.empty()) throw ParameterError("sweep needs at least one image");
    if (observed.size() != references.size()) {
        throw DimensionError("observed/reference counts differ (" +
                             std::to_string(observed.size()) + " vs " +
                             std::to_string(references.size()) + ")");
    }
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (!observed[i].same_shape(references[i])) {
            throw DimensionError("sweep pair " + std::to_string(i) + " has mismatched shapes");
        }
    }
    std::vector<SweepRecord> records;
    records.reserve(betas.size());
    for (double beta : betas) {
        LossConfig run_loss = loss;
        run_loss.beta = beta;
        double sp = 0.0, ss = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < observed.size(); ++i) {
            const DeblurResult res = variational_deblur(observed[i], run_loss, opt);
            // Metrics see the 8-bit export round trip, i.e. exactly what a
            // saved restored raster would contain.
            const LumaImage restored = quantize_to_8bit(res.image);
            sp += psnr(restored, references[i]);
            ss += ssim(restored, references[i]);
            sq += compute_q(restored, run_loss.q_cfg).q;
        }
        const double n = static_cast<double>(observed.size());
        records.push_back({beta, sp / n, ss / n, sq / n});
    }
    return records;
}

void write_sweep_csv(const std::vector<SweepRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "beta,mean_psnr,mean_ssim,mean_q\n";
    for (const SweepRecord& r : records) {
        out << detail::fmt_double(r.beta) << ',' << detail::fmt_double(r.mean_psnr) << ','
            << detail::fmt_double(r.mean_ssim) << ',' << detail::fmt_double(r.mean_q) << '\n';
    }
    if (!out) throw IoError("failed writing '" + path + "'");
}

} // namespace sharpq
