#include "sharpq/optimize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "sharpq/detail/numfmt.hpp"
#include "sharpq/errors.hpp"
#include "sharpq/q_autograd.hpp"

namespace sharpq {

void OptimizerConfig::validate() const {
    if (!(step_size > 0.0)) throw ParameterError("step size must be positive");
    if (max_iters < 1) throw ParameterError("max_iters must be >= 1");
    if (!(tol >= 0.0)) throw ParameterError("tol must be >= 0");
    if (fidelity == FidelityMode::deconv && !kernel.has_value()) {
        throw ConfigError("deconv mode requires a blur kernel");
    }
}

namespace {

// Exact mean-L1 data value (never Charbonnier): the reported numbers keep
// the plain MAE definition even though descent uses the smoothed term.
double data_value(const LumaImage& x, const LumaImage& observed, const OptimizerConfig& opt) {
    if (opt.fidelity == FidelityMode::deconv) {
        return l1_loss(convolve(x, *opt.kernel), observed);
    }
    return l1_loss(x, observed);
}

GradientField data_gradient(const LumaImage& x, const LumaImage& observed,
                            const OptimizerConfig& opt, double delta) {
    const double inv_n = 1.0 / static_cast<double>(x.size());
    const double d2 = delta * delta;
    if (opt.fidelity == FidelityMode::deconv) {
        LumaImage residual = convolve(x, *opt.kernel);
        const std::int64_t n = static_cast<std::int64_t>(residual.size());
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) {
            const double r = residual[i] - observed[i];
            residual[i] = inv_n * r / std::sqrt(r * r + d2);
        }
        return convolve_adjoint(residual, *opt.kernel);
    }
    GradientField g(x.width(), x.height());
    const std::int64_t n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const double r = x[i] - observed[i];
        g[i] = inv_n * r / std::sqrt(r * r + d2);
    }
    return g;
}

} // namespace

DeblurResult variational_deblur(const LumaImage& observed, const LossConfig& loss,
                                const OptimizerConfig& opt) {
    loss.validate();
    opt.validate();
    if (loss.beta > 0.5) {
        std::fprintf(stderr,
                     "warning: beta=%.6g exceeds 0.5; expect severe ringing artefacts\n",
                     loss.beta);
    }

    LumaImage x = opt.init == InitMode::observed
                      ? observed
                      : LumaImage(observed.width(), observed.height(), 0.0);
    const std::int64_t n = static_cast<std::int64_t>(x.size());

    auto evaluate = [&](const LumaImage& img) {
        TraceRecord rec;
        rec.l1_term = data_value(img, observed, opt);
        if (loss.beta > 0.0) {
            rec.q_value = compute_q(img, loss.q_cfg).q;
            rec.q_term = loss.beta * (-rec.q_value);
        }
        rec.total_loss = rec.l1_term + rec.q_term;
        return rec;
    };

    double prev_loss = evaluate(x).total_loss;
    DeblurResult result;
    result.trace.records.reserve(static_cast<std::size_t>(opt.max_iters));

    for (int iter = 1; iter <= opt.max_iters; ++iter) {
        GradientField g = data_gradient(x, observed, opt, loss.l1_delta);
        if (loss.beta > 0.0) {
            const GradientField qg = q_gradient(x, loss.q_cfg);
#pragma omp parallel for schedule(static)
            for (std::int64_t i = 0; i < n; ++i) g[i] -= loss.beta * qg[i];
        }
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) x[i] -= opt.step_size * g[i];

        TraceRecord rec = evaluate(x);
        rec.iter = iter;
        result.trace.records.push_back(rec);
        if (!std::isfinite(rec.total_loss)) {
            throw NumericError("optimization diverged (non-finite loss at iteration " +
                               std::to_string(iter) + "); reduce the step size");
        }
        if (std::abs(rec.total_loss - prev_loss) / std::max(prev_loss, 1e-12) < opt.tol) {
            break;
        }
        prev_loss = rec.total_loss;
    }
    result.image = std::move(x);
    return result;
}

LumaImage richardson_lucy(const LumaImage& observed, const BlurKernel& kernel, int iters) {
    if (iters < 0) throw ParameterError("iteration count must be >= 0");
    LumaImage obs = observed;
    double lo = obs[0];
    for (std::size_t i = 1; i < obs.size(); ++i) lo = std::min(lo, obs[i]);
    if (lo <= 0.0) {
        // multiplicative updates need a strictly positive input
        for (std::size_t i = 0; i < obs.size(); ++i) obs[i] += 1e-6;
    }
    const BlurKernel flipped = kernel.flipped();
    LumaImage x = obs;
    const std::int64_t n = static_cast<std::int64_t>(x.size());
    for (int it = 0; it < iters; ++it) {
        LumaImage ratio = convolve(x, kernel);
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) {
            ratio[i] = obs[i] / std::max(ratio[i], 1e-12);
        }
        const LumaImage corr = convolve(ratio, flipped);
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) x[i] *= corr[i];
    }
    return x;
}

void write_trace_csv(const OptTrace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "iter,total_loss,l1_term,q_term,q_value\n";
    for (const TraceRecord& r : trace.records) {
        out << r.iter << ',' << detail::fmt_double(r.total_loss) << ','
            << detail::fmt_double(r.l1_term) << ',' << detail::fmt_double(r.q_term) << ','
            << detail::fmt_double(r.q_value) << '\n';
    }
    if (!out) throw IoError("failed writing '" + path + "'");
}

} // namespace sharpq
