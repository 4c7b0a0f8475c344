#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "sharpq/errors.hpp"
#include "sharpq/image_io.hpp"
#include "sharpq/metrics.hpp"
#include "sharpq/sweep.hpp"
#include "support/synthetic.hpp"

using namespace sharpq;

TEST_CASE("sweep input validation") {
    const std::vector<LumaImage> obs = {testsupport::natural_scene(1, 32)};
    const std::vector<LumaImage> refs = {testsupport::natural_scene(1, 32)};
    LossConfig loss;
    OptimizerConfig opt;
    CHECK_THROWS_AS(beta_sweep(obs, refs, {}, loss, opt), ParameterError);
    CHECK_THROWS_AS(beta_sweep({}, {}, {0.0}, loss, opt), ParameterError);
    CHECK_THROWS_AS(beta_sweep(obs, {}, {0.0}, loss, opt), DimensionError);
    const std::vector<LumaImage> mismatched = {testsupport::natural_scene(1, 48)};
    CHECK_THROWS_AS(beta_sweep(obs, mismatched, {0.0}, loss, opt), DimensionError);
}

TEST_CASE("beta 0 with the identity fidelity reproduces plain evaluation") {
    std::vector<LumaImage> obs, refs;
    for (int i = 0; i < 2; ++i) {
        obs.push_back(testsupport::natural_scene(10 + i, 48));
        refs.push_back(testsupport::natural_scene(20 + i, 48));
    }
    LossConfig loss;
    OptimizerConfig opt;
    opt.fidelity = FidelityMode::direct;
    opt.init = InitMode::observed;
    const auto records = beta_sweep(obs, refs, {0.0}, loss, opt);
    REQUIRE(records.size() == 1);

    // restored == observed, so the record equals direct metrics of the
    // untouched inputs (observed images are already 8-bit quantized)
    double sp = 0.0, ss = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        sp += psnr(obs[i], refs[i]);
        ss += ssim(obs[i], refs[i]);
        sq += compute_q(obs[i], loss.q_cfg).q;
    }
    CHECK(records[0].beta == 0.0);
    CHECK(records[0].mean_psnr == sp / 2.0);
    CHECK(records[0].mean_ssim == ss / 2.0);
    CHECK(records[0].mean_q == sq / 2.0);
}

TEST_CASE("duplicate betas yield bit-identical records") {
    const LumaImage gt = testsupport::natural_scene(30, 64);
    const std::vector<LumaImage> obs = {convolve(gt, box_kernel(5))};
    const std::vector<LumaImage> refs = {gt};
    LossConfig loss;
    OptimizerConfig opt;
    opt.fidelity = FidelityMode::deconv;
    opt.kernel = box_kernel(5);
    opt.step_size = 12.0;
    opt.max_iters = 40;
    const auto records = beta_sweep(obs, refs, {0.01, 0.01}, loss, opt);
    REQUIRE(records.size() == 2);
    CHECK(records[0].mean_psnr == records[1].mean_psnr);
    CHECK(records[0].mean_ssim == records[1].mean_ssim);
    CHECK(records[0].mean_q == records[1].mean_q);
}

TEST_CASE("sweep CSV layout") {
    std::vector<SweepRecord> records = {{0.0, 30.0, 0.9, 0.1}, {0.01, 29.5, 0.91, 0.125}};
    const auto path = std::filesystem::temp_directory_path() / "sharpq_sweep_test.csv";
    write_sweep_csv(records, path.string());
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "beta,mean_psnr,mean_ssim,mean_q");
    std::getline(in, line);
    CHECK(line == "0,30,0.9,0.1");
    std::getline(in, line);
    CHECK(line == "0.01,29.5,0.91,0.125");
}
