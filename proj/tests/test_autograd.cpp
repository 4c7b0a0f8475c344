#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sharpq/errors.hpp"
#include "sharpq/q_autograd.hpp"
#include "support/synthetic.hpp"

using namespace sharpq;

namespace {

// tau low enough that smooth random fields carry anisotropic patches
const QConfig kSmoothCfg{8, 0.15, 1e-12};

double dot(const LumaImage& a, const LumaImage& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace

TEST_CASE("q_gradient of a constant image is exactly zero") {
    const GradientField g = q_gradient(LumaImage(32, 32, 0.8), kSmoothCfg);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i] == 0.0);
}

TEST_CASE("q_gradient rejects images without a full patch") {
    CHECK_THROWS_AS(q_gradient(LumaImage(4, 4, 0.0), kSmoothCfg), EmptyDomainError);
}

TEST_CASE("gradient entries sum to zero (offset direction is flat)") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const LumaImage img = testsupport::smooth_field(seed, 32, 32);
        const GradientField g = q_gradient(img, kSmoothCfg);
        double sum = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) sum += g[i];
        CHECK(std::abs(sum) <= 1e-8);
    }
}

TEST_CASE("Euler identity for the 1-homogeneous metric") {
    for (std::uint64_t seed : {4ULL, 5ULL, 6ULL}) {
        const LumaImage img = testsupport::smooth_field(seed, 32, 32);
        const GradientField g = q_gradient(img, kSmoothCfg);
        const double q = compute_q(img, kSmoothCfg).q;
        CHECK(dot(g, img) == doctest::Approx(q).epsilon(1e-8));
    }
}

TEST_CASE("gradient is homogeneous of degree zero") {
    const LumaImage img = testsupport::smooth_field(7, 32, 32);
    const GradientField g = q_gradient(img, kSmoothCfg);
    for (double c : {2.0, 3.0}) {
        LumaImage scaled = img;
        for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] *= c;
        const GradientField gc = q_gradient(scaled, kSmoothCfg);
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (std::abs(g[i]) > 1e-12) {
                CHECK(gc[i] == doctest::Approx(g[i]).epsilon(1e-8));
            } else {
                CHECK(std::abs(gc[i]) <= 1e-10);
            }
        }
    }
}

TEST_CASE("directional derivatives match central differences") {
    const LumaImage img = testsupport::smooth_field(8, 32, 32);
    const GradientField g = q_gradient(img, kSmoothCfg);
    const double h = 1e-5;
    testsupport::TestRng rng(99);
    for (int dir = 0; dir < 20; ++dir) {
        LumaImage v(32, 32);
        double norm = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = rng.normal();
            norm += v[i] * v[i];
        }
        norm = std::sqrt(norm);
        LumaImage plus = img, minus = img;
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] /= norm;
            plus[i] += h * v[i];
            minus[i] -= h * v[i];
        }
        const double fd =
            (compute_q(plus, kSmoothCfg).q - compute_q(minus, kSmoothCfg).q) / (2.0 * h);
        const double analytic = dot(g, v);
        CHECK(analytic == doctest::Approx(fd).epsilon(1e-4));
    }
}

TEST_CASE("fd_gradient of a constant image is numerically zero") {
    const GradientField g = fd_gradient(LumaImage(16, 16, 0.4), kSmoothCfg, 1e-5);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(g[i]) <= 1e-8);
}

TEST_CASE("fd_gradient agrees with q_gradient on a single-patch ramp") {
    // pure horizontal ramp: s2 = 0, the lambda2 branch is zeroed on both
    // routes (symmetric probes cancel), the lambda1 branch carries all
    LumaImage ramp(8, 8);
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) ramp.at(x, y) = 0.1 * x;
    }
    const GradientField a = q_gradient(ramp, kSmoothCfg);
    const GradientField f = fd_gradient(ramp, kSmoothCfg, 1e-5);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double m = std::max(std::abs(a[i]), std::abs(f[i]));
        if (m < 1e-9) continue;
        CHECK(std::abs(a[i] - f[i]) / m <= 1e-4);
    }
}

TEST_CASE("fd_gradient inherits the degree-zero homogeneity") {
    const LumaImage img = testsupport::smooth_field(10, 16, 16);
    LumaImage doubled = img;
    for (std::size_t i = 0; i < doubled.size(); ++i) doubled[i] *= 2.0;
    const GradientField f1 = fd_gradient(img, kSmoothCfg, 1e-5);
    const GradientField f2 = fd_gradient(doubled, kSmoothCfg, 1e-5);
    for (std::size_t i = 0; i < f1.size(); ++i) {
        CHECK(f2[i] == doctest::Approx(f1[i]).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("fd_gradient validates its step") {
    CHECK_THROWS_AS(fd_gradient(LumaImage(8, 8, 0.1), kSmoothCfg, 0.0), ParameterError);
}

TEST_CASE("check_gradient on a constant image skips every site") {
    const GradCheckReport r = check_gradient(LumaImage(16, 16, 0.4), kSmoothCfg, 1e-5);
    CHECK(r.n_sites_checked == 0);
    CHECK(r.n_sites_skipped_degenerate == 256);
    CHECK(r.max_rel_err == 0.0);
    CHECK(r.mean_rel_err == 0.0);
}

TEST_CASE("check_gradient passes on smooth random fields") {
    for (std::uint64_t seed : {11ULL, 12ULL, 13ULL}) {
        const LumaImage img = testsupport::smooth_field(seed, 32, 32);
        const GradCheckReport r = check_gradient(img, kSmoothCfg, 1e-5);
        CHECK(r.max_rel_err <= 1e-4);
        CHECK(r.max_rel_err >= r.mean_rel_err);
        CHECK(r.n_sites_checked + r.n_sites_skipped_degenerate == 1024);
        CHECK(r.n_sites_checked >= 1024 * 9 / 10);
        CHECK(r.fd_step == 1e-5);
    }
}

TEST_CASE("check_gradient statistics are scale-invariant") {
    const LumaImage img = testsupport::smooth_field(14, 32, 32);
    LumaImage scaled = img;
    for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] *= 3.0;
    const GradCheckReport a = check_gradient(img, kSmoothCfg, 1e-5);
    const GradCheckReport b = check_gradient(scaled, kSmoothCfg, 1e-5);
    // the analytic field is identical; finite differences shift only in
    // their last digits, so counts match and the stats agree tightly
    CHECK(a.n_sites_checked == b.n_sites_checked);
    CHECK(a.n_sites_skipped_degenerate == b.n_sites_skipped_degenerate);
    CHECK(std::abs(a.max_rel_err - b.max_rel_err) <= 1e-6);
    CHECK(std::abs(a.mean_rel_err - b.mean_rel_err) <= 1e-6);
}
