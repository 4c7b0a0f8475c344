#include "sharpq/q_metric.hpp"

#include <cmath>
#include <string>

#include "json.hpp"

#include "sharpq/errors.hpp"

namespace sharpq {

void QConfig::validate() const {
    if (patch_size < 2) throw ParameterError("patch size must be >= 2");
    if (!(tau >= 0.0 && tau < 1.0)) throw ParameterError("tau must lie in [0, 1)");
    if (!(eps > 0.0)) throw ParameterError("eps must be positive");
}

namespace {

// Tensor accumulation over one window of the gradient fields. Fixed
// row-major order inside the window keeps the sums reproducible.
StructureTensor accumulate_window(const LumaImage& gx, const LumaImage& gy, int x0, int y0,
                                  int w, int h) {
    StructureTensor t;
    for (int y = y0; y < y0 + h; ++y) {
        for (int x = x0; x < x0 + w; ++x) {
            const double vx = gx.at(x, y);
            const double vy = gy.at(x, y);
            t.a += vx * vx;
            t.b += vx * vy;
            t.c += vy * vy;
        }
    }
    return t;
}

PatchAnalysis analyze_patch(const LumaImage& gx, const LumaImage& gy, PatchOrigin o,
                            const QConfig& cfg) {
    const StructureTensor t =
        accumulate_window(gx, gy, o.x, o.y, cfg.patch_size, cfg.patch_size);
    const SingularPair s = singular_values(t);
    PatchAnalysis p;
    p.x = o.x;
    p.y = o.y;
    p.s1 = s.s1;
    p.s2 = s.s2;
    p.r = coherence(s.s1, s.s2, cfg.eps);
    p.anisotropic = p.r > cfg.tau;
    p.qi = p.anisotropic ? s.s1 * p.r : 0.0;
    return p;
}

} // namespace

StructureTensor structure_tensor(const LumaImage& gx, const LumaImage& gy) {
    if (!gx.same_shape(gy)) {
        throw DimensionError("gradient fields must have identical shapes");
    }
    return accumulate_window(gx, gy, 0, 0, gx.width(), gx.height());
}

SingularPair singular_values(const StructureTensor& t) {
    if (std::isnan(t.a) || std::isnan(t.b) || std::isnan(t.c)) {
        throw NumericError("structure tensor contains NaN");
    }
    if (t.a < 0.0 || t.c < 0.0) {
        throw NumericError("structure tensor diagonal must be non-negative");
    }
    const double half_tr = (t.a + t.c) / 2.0;
    const double half_gap = (t.a - t.c) / 2.0;
    const double disc = std::sqrt(half_gap * half_gap + t.b * t.b);
    const double l1 = half_tr + disc;
    const double l2 = std::max(half_tr - disc, 0.0);
    return {std::sqrt(l1), std::sqrt(l2)};
}

double coherence(double s1, double s2, double eps) {
    if (s2 > s1) throw ParameterError("coherence requires s1 >= s2");
    if (!(s1 + s2 > eps)) return 0.0;
    return (s1 - s2) / (s1 + s2);
}

double patch_q(double s1, double s2, const QConfig& cfg) {
    const double r = coherence(s1, s2, cfg.eps);
    return r > cfg.tau ? s1 * r : 0.0;
}

QReport compute_q(const LumaImage& img, const QConfig& cfg) {
    cfg.validate();
    const auto origins = extract_patches(img, cfg.patch_size);
    if (origins.empty()) {
        throw EmptyDomainError("no full " + std::to_string(cfg.patch_size) + "x" +
                               std::to_string(cfg.patch_size) + " patch fits a " +
                               std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                               " image");
    }
    const GradientPair g = spatial_gradients(img);

    QReport report;
    report.config = cfg;
    report.patches.resize(origins.size());
    const std::int64_t n = static_cast<std::int64_t>(origins.size());
    // Patches are independent; each writes its own slot.
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        report.patches[i] = analyze_patch(g.gx, g.gy, origins[i], cfg);
    }
    // Reduce serially in row-major patch order for bit reproducibility.
    double sum = 0.0;
    int aniso = 0;
    for (const PatchAnalysis& p : report.patches) {
        sum += p.qi;
        if (p.anisotropic) ++aniso;
    }
    report.n_patches = static_cast<int>(origins.size());
    report.n_anisotropic = aniso;
    report.q = sum / static_cast<double>(report.n_patches);
    return report;
}

std::string qreport_to_json(const QReport& report) {
    nlohmann::ordered_json doc;
    doc["q"] = report.q;
    doc["n_patches"] = report.n_patches;
    doc["n_anisotropic"] = report.n_anisotropic;
    doc["patch_size"] = report.config.patch_size;
    doc["tau"] = report.config.tau;
    auto patches = nlohmann::ordered_json::array();
    for (const PatchAnalysis& p : report.patches) {
        patches.push_back({{"x", p.x},
                           {"y", p.y},
                           {"s1", p.s1},
                           {"s2", p.s2},
                           {"r", p.r},
                           {"qi", p.qi}});
    }
    doc["patches"] = std::move(patches);
    return doc.dump(2) + "\n";
}

} // namespace sharpq
