#pragma once

#include <string>

#include "sharpq/image.hpp"

namespace sharpq {

/// Loads an 8-bit grayscale or 8-bit RGB raster (PNG or binary PGM/P5,
/// chosen by extension). RGB is converted to luma with BT.601
/// coefficients (0.299, 0.587, 0.114); codes map to [0,1] by /255.
LumaImage load_image(const std::string& path);

/// Writes an 8-bit grayscale raster (PNG or binary PGM/P5, chosen by
/// extension). Samples are clamped to [0,1] and quantized with
/// round-half-up: code = round(v * 255).
void save_image(const LumaImage& img, const std::string& path);

/// Clamp-and-quantize round trip applied by save_image, without the file:
/// round(clamp(v,0,1)*255)/255 per sample. Used when evaluation should
/// see exactly what an exported raster would contain.
LumaImage quantize_to_8bit(const LumaImage& img);

/// 8-bit code for one sample under the export rule.
unsigned char quantize_sample(double v);

/// Visualization export of a gradient field: affine normalization
/// (min -> 0, max -> 255, flat fields -> 0), then the regular raster path.
void export_gradient_image(const GradientField& field, const std::string& path);

/// Full-precision dump of a gradient field: one CSV row per image row.
void export_gradient_csv(const GradientField& field, const std::string& path);

} // namespace sharpq
