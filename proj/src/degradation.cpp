#include "sharpq/degradation.hpp"

#include <cmath>
#include <numbers>

#include "json.hpp"

#include "sharpq/errors.hpp"

namespace sharpq {

void DegradationConfig::validate() const {
    if (!(sigma_e >= 0.0)) throw ParameterError("sigma_e must be >= 0");
    kernel.make(); // validates kernel parameters
}

double NormalSampler::uniform01() {
    // top 53 bits of the engine output, uniform on [0,1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double NormalSampler::next() {
    const double u1 = 1.0 - uniform01(); // (0,1], keeps the log finite
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

LumaImage degrade(const LumaImage& img, const DegradationConfig& cfg) {
    cfg.validate();
    LumaImage out = convolve(img, cfg.kernel.make());
    if (cfg.sigma_e > 0.0) {
        // Row-major noise stream regardless of any internal parallelism,
        // so a seed pins the exact output.
        NormalSampler noise(cfg.seed);
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] += cfg.sigma_e * noise.next();
        }
    }
    return out;
}

std::string degradation_config_to_json(const DegradationConfig& cfg) {
    nlohmann::ordered_json k;
    k["type"] = cfg.kernel.type == KernelSpec::Type::box ? "box" : "gaussian";
    k["k"] = cfg.kernel.k;
    if (cfg.kernel.type == KernelSpec::Type::gaussian) k["sigma"] = cfg.kernel.sigma;
    nlohmann::ordered_json doc;
    doc["kernel"] = std::move(k);
    doc["sigma_e"] = cfg.sigma_e;
    doc["seed"] = cfg.seed;
    return doc.dump(2) + "\n";
}

DegradationConfig degradation_config_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
        DegradationConfig cfg;
        const auto& k = doc.at("kernel");
        const std::string type = k.at("type").get<std::string>();
        if (type == "box") {
            cfg.kernel.type = KernelSpec::Type::box;
        } else if (type == "gaussian") {
            cfg.kernel.type = KernelSpec::Type::gaussian;
            cfg.kernel.sigma = k.at("sigma").get<double>();
        } else {
            throw FormatError("unknown kernel type '" + type + "' in degradation config");
        }
        cfg.kernel.k = k.at("k").get<int>();
        cfg.sigma_e = doc.at("sigma_e").get<double>();
        cfg.seed = doc.at("seed").get<std::uint64_t>();
        cfg.validate();
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed degradation config JSON: ") + e.what());
    }
}

} // namespace sharpq
