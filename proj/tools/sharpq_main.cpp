#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sharpq/degradation.hpp"
#include "sharpq/errors.hpp"
#include "sharpq/image_io.hpp"
#include "sharpq/metrics.hpp"
#include "sharpq/optimize.hpp"
#include "sharpq/q_autograd.hpp"
#include "sharpq/q_metric.hpp"
#include "sharpq/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitNumeric = 3;

constexpr double kGradCheckThreshold = 1e-4;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw sharpq::IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw sharpq::IoError("failed writing '" + path + "'");
}

// Raster files of a directory, sorted by filename for a stable pairing.
std::vector<std::string> list_rasters(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) {
        throw sharpq::IoError("'" + dir + "' is not a directory");
    }
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (ext == ".png" || ext == ".pgm") paths.push_back(entry.path().string());
    }
    std::sort(paths.begin(), paths.end(),
              [](const std::string& a, const std::string& b) {
                  return std::filesystem::path(a).filename() < std::filesystem::path(b).filename();
              });
    return paths;
}

sharpq::FidelityMode parse_mode(const std::string& mode) {
    if (mode == "direct") return sharpq::FidelityMode::direct;
    if (mode == "deconv") return sharpq::FidelityMode::deconv;
    throw CLI::ValidationError("--mode", "must be 'direct' or 'deconv'");
}

struct DeblurFlags {
    std::string mode = "direct";
    std::string kernel_spec;
    double beta = 0.01;
    double step = 1e-2;
    int iters = 500;
};

void add_deblur_flags(CLI::App* cmd, DeblurFlags& f, bool with_beta) {
    cmd->add_option("--mode", f.mode, "Fidelity mode: direct|deconv")->default_val("direct");
    cmd->add_option("--kernel", f.kernel_spec, "Blur kernel, box:K or gauss:K:sigma");
    if (with_beta) {
        cmd->add_option("--beta", f.beta, "Sharpness weight")->default_val("0.01");
    }
    cmd->add_option("--step", f.step, "Gradient descent step size")->default_val("1e-2");
    cmd->add_option("--iters", f.iters, "Maximum iterations")->default_val("500");
}

sharpq::OptimizerConfig make_opt_config(const DeblurFlags& f) {
    sharpq::OptimizerConfig opt;
    opt.fidelity = parse_mode(f.mode);
    opt.step_size = f.step;
    opt.max_iters = f.iters;
    if (!f.kernel_spec.empty()) {
        opt.kernel = sharpq::KernelSpec::parse(f.kernel_spec).make();
    }
    return opt;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sharpness metric toolkit: no-reference Q, its analytic gradient, "
                 "out-of-focus degradation, and a variational deblurrer"};
    app.require_subcommand(1);

    // ---- q ----
    std::string q_image, q_json;
    sharpq::QConfig q_cfg;
    auto* cmd_q = app.add_subcommand("q", "Compute the sharpness metric Q of an image");
    cmd_q->add_option("image", q_image, "Input raster (.pgm/.png)")->required();
    cmd_q->add_option("--patch-size", q_cfg.patch_size)->default_val("8");
    cmd_q->add_option("--tau", q_cfg.tau)->default_val("0.5");
    cmd_q->add_option("--json", q_json, "Write the full report to this JSON file");

    // ---- degrade ----
    std::string dg_in, dg_out, dg_kernel;
    double dg_sigma_e = 0.0;
    std::uint64_t dg_seed = 1234;
    auto* cmd_dg = app.add_subcommand("degrade", "Blur an image and add seeded Gaussian noise");
    cmd_dg->add_option("in", dg_in)->required();
    cmd_dg->add_option("out", dg_out)->required();
    cmd_dg->add_option("--kernel", dg_kernel, "box:K or gauss:K:sigma")->required();
    cmd_dg->add_option("--sigma-e", dg_sigma_e, "Noise standard deviation")->default_val("0.0");
    cmd_dg->add_option("--seed", dg_seed, "RNG seed")->default_val("1234");

    // ---- gradcheck ----
    std::string gc_image;
    sharpq::QConfig gc_cfg;
    double gc_h = 1e-5;
    auto* cmd_gc = app.add_subcommand(
        "gradcheck", "Verify the analytic Q gradient against finite differences");
    cmd_gc->set_help_flag("--help", "Print help"); // frees -h so --h can be the fd step
    cmd_gc->add_option("image", gc_image)->required();
    cmd_gc->add_option("--patch-size", gc_cfg.patch_size)->default_val("8");
    cmd_gc->add_option("--tau", gc_cfg.tau)->default_val("0.5");
    cmd_gc->add_option("--h", gc_h, "Finite-difference step")->default_val("1e-5");

    // ---- deblur ----
    std::string db_in, db_out, db_trace;
    DeblurFlags db_flags;
    auto* cmd_db = app.add_subcommand("deblur", "Variational deblurring by gradient descent");
    cmd_db->add_option("in", db_in)->required();
    cmd_db->add_option("out", db_out)->required();
    add_deblur_flags(cmd_db, db_flags, /*with_beta=*/true);
    cmd_db->add_option("--trace", db_trace, "Write the per-iteration loss trace CSV here");

    // ---- rl ----
    std::string rl_in, rl_out, rl_kernel;
    int rl_iters = 50;
    auto* cmd_rl = app.add_subcommand("rl", "Richardson-Lucy deconvolution baseline");
    cmd_rl->add_option("in", rl_in)->required();
    cmd_rl->add_option("out", rl_out)->required();
    cmd_rl->add_option("--kernel", rl_kernel, "box:K or gauss:K:sigma")->required();
    cmd_rl->add_option("--iters", rl_iters)->default_val("50");

    // ---- evaluate ----
    std::string ev_pairs, ev_json;
    sharpq::QConfig ev_cfg;
    auto* cmd_ev = app.add_subcommand("evaluate", "PSNR/SSIM/Q over restored,reference pairs");
    cmd_ev->add_option("--pairs", ev_pairs, "CSV with header restored,reference")->required();
    cmd_ev->add_option("--patch-size", ev_cfg.patch_size)->default_val("8");
    cmd_ev->add_option("--tau", ev_cfg.tau)->default_val("0.5");
    cmd_ev->add_option("--json", ev_json, "Write the report to this JSON file");

    // ---- sweep ----
    std::string sw_inputs, sw_refs, sw_out = "sweep.csv";
    std::vector<double> sw_betas;
    DeblurFlags sw_flags;
    auto* cmd_sw = app.add_subcommand("sweep", "Deblur at several beta values and aggregate");
    cmd_sw->add_option("--inputs", sw_inputs, "Directory of observed images")->required();
    cmd_sw->add_option("--refs", sw_refs, "Directory of reference images")->required();
    cmd_sw->add_option("--betas", sw_betas, "Comma-separated beta values")
        ->required()
        ->delimiter(',');
    cmd_sw->add_option("--out", sw_out, "Output CSV path")->default_val("sweep.csv");
    add_deblur_flags(cmd_sw, sw_flags, /*with_beta=*/false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (cmd_q->parsed()) {
            const sharpq::LumaImage img = sharpq::load_image(q_image);
            const sharpq::QReport report = sharpq::compute_q(img, q_cfg);
            std::printf("Q = %s\n", fmt(report.q).c_str());
            std::printf("patches = %d, anisotropic = %d\n", report.n_patches,
                        report.n_anisotropic);
            if (!q_json.empty()) write_text_file(q_json, sharpq::qreport_to_json(report));
        } else if (cmd_dg->parsed()) {
            sharpq::DegradationConfig cfg;
            cfg.kernel = sharpq::KernelSpec::parse(dg_kernel);
            cfg.sigma_e = dg_sigma_e;
            cfg.seed = dg_seed;
            const sharpq::LumaImage img = sharpq::load_image(dg_in);
            sharpq::save_image(sharpq::degrade(img, cfg), dg_out);
            std::printf("wrote %s\n", dg_out.c_str());
        } else if (cmd_gc->parsed()) {
            const sharpq::LumaImage img = sharpq::load_image(gc_image);
            const sharpq::GradCheckReport rep = sharpq::check_gradient(img, gc_cfg, gc_h);
            std::printf("max_rel_err = %s\n", fmt(rep.max_rel_err).c_str());
            std::printf("mean_rel_err = %s\n", fmt(rep.mean_rel_err).c_str());
            std::printf("sites_checked = %lld\n",
                        static_cast<long long>(rep.n_sites_checked));
            std::printf("sites_skipped_degenerate = %lld\n",
                        static_cast<long long>(rep.n_sites_skipped_degenerate));
            std::printf("h = %s\n", fmt(rep.fd_step).c_str());
            if (rep.max_rel_err > kGradCheckThreshold) {
                std::fprintf(stderr, "gradient check FAILED (max_rel_err > %g)\n",
                             kGradCheckThreshold);
                return kExitNumeric;
            }
        } else if (cmd_db->parsed()) {
            sharpq::LossConfig loss;
            loss.beta = db_flags.beta;
            const sharpq::OptimizerConfig opt = make_opt_config(db_flags);
            const sharpq::LumaImage observed = sharpq::load_image(db_in);
            const sharpq::DeblurResult res = sharpq::variational_deblur(observed, loss, opt);
            sharpq::save_image(res.image, db_out);
            if (!db_trace.empty()) sharpq::write_trace_csv(res.trace, db_trace);
            if (!res.trace.records.empty()) {
                const auto& last = res.trace.records.back();
                std::printf("iterations = %d, final_loss = %s\n", last.iter,
                            fmt(last.total_loss).c_str());
            }
            std::printf("wrote %s\n", db_out.c_str());
        } else if (cmd_rl->parsed()) {
            const sharpq::BlurKernel kernel = sharpq::KernelSpec::parse(rl_kernel).make();
            const sharpq::LumaImage observed = sharpq::load_image(rl_in);
            sharpq::save_image(sharpq::richardson_lucy(observed, kernel, rl_iters), rl_out);
            std::printf("wrote %s\n", rl_out.c_str());
        } else if (cmd_ev->parsed()) {
            const auto pairs = sharpq::read_pairs_csv(ev_pairs);
            const sharpq::EvalReport report = sharpq::evaluate_pairs(pairs, ev_cfg);
            for (const auto& r : report.records) {
                std::printf("%s: psnr=%s ssim=%s q=%s\n", r.image_id.c_str(),
                            fmt(r.psnr).c_str(), fmt(r.ssim).c_str(), fmt(r.q).c_str());
            }
            std::printf("mean: psnr=%s ssim=%s q=%s\n", fmt(report.mean_psnr).c_str(),
                        fmt(report.mean_ssim).c_str(), fmt(report.mean_q).c_str());
            if (!ev_json.empty()) write_text_file(ev_json, sharpq::eval_report_to_json(report));
        } else if (cmd_sw->parsed()) {
            const auto input_paths = list_rasters(sw_inputs);
            const auto ref_paths = list_rasters(sw_refs);
            if (input_paths.size() != ref_paths.size() || input_paths.empty()) {
                throw sharpq::ParameterError("--inputs and --refs must hold the same nonzero "
                                             "number of rasters (matched by sorted filename)");
            }
            std::vector<sharpq::LumaImage> observed, refs;
            for (const auto& p : input_paths) observed.push_back(sharpq::load_image(p));
            for (const auto& p : ref_paths) refs.push_back(sharpq::load_image(p));
            sharpq::LossConfig loss;
            const sharpq::OptimizerConfig opt = make_opt_config(sw_flags);
            const auto records = sharpq::beta_sweep(observed, refs, sw_betas, loss, opt);
            for (const auto& r : records) {
                std::printf("beta=%s: psnr=%s ssim=%s q=%s\n", fmt(r.beta).c_str(),
                            fmt(r.mean_psnr).c_str(), fmt(r.mean_ssim).c_str(),
                            fmt(r.mean_q).c_str());
            }
            sharpq::write_sweep_csv(records, sw_out);
            std::printf("wrote %s\n", sw_out.c_str());
        }
    } catch (const sharpq::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumeric;
    }
    return kExitOk;
}
