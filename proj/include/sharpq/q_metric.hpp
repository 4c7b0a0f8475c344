#pragma once

#include <string>
#include <vector>

#include "sharpq/image.hpp"

namespace sharpq {

/// Knobs of the no-reference sharpness metric Q.
struct QConfig {
    int patch_size = 8;   ///< side length d of the analysis patches
    double tau = 0.5;     ///< coherence threshold separating isotropic patches
    double eps = 1e-12;   ///< stability constant for near-zero singular values

    void validate() const;
};

/// 2x2 symmetric positive semidefinite matrix (a, b; b, c) accumulated
/// from patch gradients: a = sum gx^2, b = sum gx*gy, c = sum gy^2.
struct StructureTensor {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// Singular values of the patch gradient matrix, s1 >= s2 >= 0.
struct SingularPair {
    double s1 = 0.0;
    double s2 = 0.0;
};

/// Per-patch analysis: singular values, local coherence, and the patch
/// sharpness contribution.
struct PatchAnalysis {
    int x = 0;
    int y = 0;
    double s1 = 0.0;
    double s2 = 0.0;
    double r = 0.0;
    bool anisotropic = false;
    double qi = 0.0;
};

/// Full result of a Q evaluation over one image.
struct QReport {
    QConfig config;
    std::vector<PatchAnalysis> patches;
    int n_patches = 0;
    int n_anisotropic = 0;
    double q = 0.0;
};

/// Accumulates the structure tensor over two same-shaped gradient fields.
StructureTensor structure_tensor(const LumaImage& gx, const LumaImage& gy);

/// Closed-form singular values from the structure tensor eigenvalues:
/// lambda = tr/2 +- sqrt(((a-c)/2)^2 + b^2), s = sqrt(lambda), with a tiny
/// negative lambda2 clamped to 0. NaN entries raise NumericError.
SingularPair singular_values(const StructureTensor& t);

/// Local coherence R = (s1 - s2)/(s1 + s2); 0 when s1 + s2 <= eps.
double coherence(double s1, double s2, double eps);

/// Patch sharpness: s1 * R for anisotropic patches (R > tau), else 0.
double patch_q(double s1, double s2, const QConfig& cfg);

/// Sharpness metric over the whole image: gradients on the full image,
/// then per-patch tensor -> singular values -> coherence -> patch Q,
/// averaged over all patches (isotropic patches contribute 0).
QReport compute_q(const LumaImage& img, const QConfig& cfg = {});

/// JSON document for a QReport (schema used by the CLI's --json output).
std::string qreport_to_json(const QReport& report);

} // namespace sharpq
