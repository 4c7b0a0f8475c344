#include "sharpq/metrics.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "sharpq/errors.hpp"
#include "sharpq/image_io.hpp"

namespace sharpq {

double psnr(const LumaImage& a, const LumaImage& b) {
    if (!a.same_shape(b)) throw DimensionError("psnr shape mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    const double mse = sum / static_cast<double>(a.size());
    if (mse < 1e-12) return kPsnrCap;
    return std::min(10.0 * std::log10(1.0 / mse), kPsnrCap);
}

namespace {

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;
constexpr double kSsimC1 = 0.01 * 0.01; // (K1 * L)^2, L = 1
constexpr double kSsimC2 = 0.03 * 0.03;

const std::vector<double>& ssim_window() {
    static const std::vector<double> w = [] {
        std::vector<double> v(kSsimWindow * kSsimWindow);
        const int r = kSsimWindow / 2;
        double sum = 0.0;
        for (int y = -r; y <= r; ++y) {
            for (int x = -r; x <= r; ++x) {
                const double g = std::exp(-(static_cast<double>(x) * x +
                                            static_cast<double>(y) * y) /
                                          (2.0 * kSsimSigma * kSsimSigma));
                v[static_cast<std::size_t>(y + r) * kSsimWindow + (x + r)] = g;
                sum += g;
            }
        }
        for (double& g : v) g /= sum;
        return v;
    }();
    return w;
}

} // namespace

double ssim(const LumaImage& a, const LumaImage& b) {
    if (!a.same_shape(b)) throw DimensionError("ssim shape mismatch");
    if (a.width() < kSsimWindow || a.height() < kSsimWindow) {
        throw DimensionError("ssim needs at least " + std::to_string(kSsimWindow) + "x" +
                             std::to_string(kSsimWindow) + " images");
    }
    const std::vector<double>& win = ssim_window();
    const int nx = a.width() - kSsimWindow + 1;
    const int ny = a.height() - kSsimWindow + 1;
    std::vector<double> row_sums(ny, 0.0);
#pragma omp parallel for schedule(static)
    for (int y0 = 0; y0 < ny; ++y0) {
        double row = 0.0;
        for (int x0 = 0; x0 < nx; ++x0) {
            double mx = 0.0, my = 0.0, xx = 0.0, yy = 0.0, xy = 0.0;
            for (int wy = 0; wy < kSsimWindow; ++wy) {
                for (int wx = 0; wx < kSsimWindow; ++wx) {
                    const double wgt = win[static_cast<std::size_t>(wy) * kSsimWindow + wx];
                    const double va = a.at(x0 + wx, y0 + wy);
                    const double vb = b.at(x0 + wx, y0 + wy);
                    mx += wgt * va;
                    my += wgt * vb;
                    xx += wgt * va * va;
                    yy += wgt * vb * vb;
                    xy += wgt * va * vb;
                }
            }
            const double var_x = xx - mx * mx;
            const double var_y = yy - my * my;
            const double cov = xy - mx * my;
            row += ((2.0 * mx * my + kSsimC1) * (2.0 * cov + kSsimC2)) /
                   ((mx * mx + my * my + kSsimC1) * (var_x + var_y + kSsimC2));
        }
        row_sums[y0] = row;
    }
    double total = 0.0;
    for (double r : row_sums) total += r; // fixed order
    return total / (static_cast<double>(nx) * ny);
}

EvalReport evaluate_pairs(const std::vector<std::pair<std::string, std::string>>& pairs,
                          const QConfig& q_cfg) {
    q_cfg.validate();
    EvalReport report;
    report.q_cfg = q_cfg;
    for (const auto& [restored_path, reference_path] : pairs) {
        const auto t0 = std::chrono::steady_clock::now();
        LumaImage restored, reference;
        try {
            restored = load_image(restored_path);
            reference = load_image(reference_path);
        } catch (const std::exception& e) {
            throw IoError("failed loading pair ('" + restored_path + "', '" + reference_path +
                          "'): " + e.what());
        }
        if (!restored.same_shape(reference)) {
            throw DimensionError("pair ('" + restored_path + "', '" + reference_path +
                                 "') has mismatched shapes");
        }
        MetricRecord rec;
        rec.image_id = restored_path;
        rec.psnr = psnr(restored, reference);
        rec.ssim = ssim(restored, reference);
        rec.q = compute_q(restored, q_cfg).q;
        rec.wall_time =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.records.push_back(std::move(rec));
    }
    if (!report.records.empty()) {
        double sp = 0.0, ss = 0.0, sq = 0.0;
        for (const MetricRecord& r : report.records) {
            sp += r.psnr;
            ss += r.ssim;
            sq += r.q;
        }
        const double n = static_cast<double>(report.records.size());
        report.mean_psnr = sp / n;
        report.mean_ssim = ss / n;
        report.mean_q = sq / n;
    }
    return report;
}

std::string eval_report_to_json(const EvalReport& report) {
    nlohmann::ordered_json doc;
    doc["patch_size"] = report.q_cfg.patch_size;
    doc["tau"] = report.q_cfg.tau;
    auto records = nlohmann::ordered_json::array();
    for (const MetricRecord& r : report.records) {
        records.push_back(
            {{"id", r.image_id}, {"psnr", r.psnr}, {"ssim", r.ssim}, {"q", r.q}});
    }
    doc["records"] = std::move(records);
    doc["mean_psnr"] = report.mean_psnr;
    doc["mean_ssim"] = report.mean_ssim;
    doc["mean_q"] = report.mean_q;
    return doc.dump(2) + "\n";
}

std::vector<std::pair<std::string, std::string>> read_pairs_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty pairs file '" + path + "'");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "restored,reference") {
        throw FormatError("pairs file '" + path + "' must start with header 'restored,reference'");
    }
    std::vector<std::pair<std::string, std::string>> pairs;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw FormatError("malformed row '" + line + "' in '" + path + "'");
        }
        pairs.emplace_back(line.substr(0, comma), line.substr(comma + 1));
    }
    return pairs;
}

} // namespace sharpq
