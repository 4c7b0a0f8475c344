#include "sharpq/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <png.h>

#include "sharpq/detail/numfmt.hpp"
#include "sharpq/errors.hpp"

namespace sharpq {

namespace {

std::string lower_ext(const std::string& path) {
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return {};
    std::string ext = path.substr(dot);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

// BT.601 luma; code planes are scaled to [0,1] before mixing so a pure
// channel maps exactly onto its coefficient.
double luma601(unsigned char r, unsigned char g, unsigned char b) {
    return 0.299 * (r / 255.0) + 0.587 * (g / 255.0) + 0.114 * (b / 255.0);
}

// ---- PGM (binary P5) ----

int next_pgm_token(std::istream& in, const std::string& path) {
    // skips whitespace and '#' comments
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (!std::isspace(c)) {
            break;
        }
        c = in.get();
    }
    if (c == EOF) throw FormatError("truncated PGM header in '" + path + "'");
    int value = 0;
    bool any = false;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        any = true;
        c = in.get();
    }
    if (!any) throw FormatError("malformed PGM header in '" + path + "'");
    if (c != EOF) in.unget();
    return value;
}

LumaImage load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '5') {
        throw FormatError("'" + path + "' is not a binary PGM (P5) file");
    }
    const int w = next_pgm_token(in, path);
    const int h = next_pgm_token(in, path);
    const int maxval = next_pgm_token(in, path);
    if (w < 1 || h < 1) throw FormatError("bad PGM dimensions in '" + path + "'");
    if (maxval != 255) {
        throw FormatError("unsupported PGM maxval " + std::to_string(maxval) + " in '" + path +
                          "' (only 8-bit, maxval 255)");
    }
    in.get(); // single whitespace byte before the raster
    std::vector<unsigned char> bytes(static_cast<std::size_t>(w) * h);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
        throw FormatError("truncated PGM raster in '" + path + "'");
    }
    LumaImage img(w, h);
    for (std::size_t i = 0; i < bytes.size(); ++i) img[i] = bytes[i] / 255.0;
    return img;
}

void save_pgm(const LumaImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    std::vector<unsigned char> bytes(img.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = quantize_sample(img[i]);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing '" + path + "'");
}

// ---- PNG via libpng ----

void png_error_longjmp(png_structp png, png_const_charp) {
    std::longjmp(png_jmpbuf(png), 1);
}

void png_warning_ignore(png_structp, png_const_charp) {}

struct PngHeader {
    png_uint_32 w = 0;
    png_uint_32 h = 0;
    int bit_depth = 0;
    int color_type = 0;
    std::size_t rowbytes = 0;
};

// The setjmp frames below hold only plain pointers; every C++ object with
// a destructor stays in the caller, which cleans up on a false return.
bool png_read_header_guarded(png_structp png, png_infop info, std::FILE* fp, PngHeader* hdr) {
    if (setjmp(png_jmpbuf(png))) return false;
    png_init_io(png, fp);
    png_read_info(png, info);
    hdr->w = png_get_image_width(png, info);
    hdr->h = png_get_image_height(png, info);
    hdr->bit_depth = png_get_bit_depth(png, info);
    hdr->color_type = png_get_color_type(png, info);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);
    hdr->rowbytes = png_get_rowbytes(png, info);
    return true;
}

bool png_read_pixels_guarded(png_structp png, png_bytep* rows) {
    if (setjmp(png_jmpbuf(png))) return false;
    png_read_image(png, rows);
    png_read_end(png, nullptr);
    return true;
}

bool png_write_guarded(png_structp png, png_infop info, std::FILE* fp, png_bytep* rows, int w,
                       int h) {
    if (setjmp(png_jmpbuf(png))) return false;
    png_init_io(png, fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows);
    png_write_end(png, nullptr);
    return true;
}

LumaImage load_png(const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw IoError("cannot open '" + path + "' for reading");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_longjmp,
                                             png_warning_ignore);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw IoError("libpng initialization failed for '" + path + "'");
    }

    PngHeader hdr;
    if (!png_read_header_guarded(png, info, fp, &hdr)) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw FormatError("failed to decode PNG '" + path + "'");
    }

    if (hdr.bit_depth != 8 ||
        (hdr.color_type != PNG_COLOR_TYPE_GRAY && hdr.color_type != PNG_COLOR_TYPE_RGB)) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw FormatError("unsupported PNG layout in '" + path +
                          "' (need 8-bit grayscale or 8-bit RGB)");
    }

    std::vector<unsigned char> data(hdr.rowbytes * hdr.h);
    std::vector<png_bytep> rows(hdr.h);
    for (png_uint_32 y = 0; y < hdr.h; ++y) rows[y] = data.data() + y * hdr.rowbytes;

    if (!png_read_pixels_guarded(png, rows.data())) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw FormatError("failed to decode PNG '" + path + "'");
    }
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);

    const png_uint_32 w = hdr.w;
    const png_uint_32 h = hdr.h;
    const std::size_t rowbytes = hdr.rowbytes;
    const int color_type = hdr.color_type;
    LumaImage img(static_cast<int>(w), static_cast<int>(h));
    if (color_type == PNG_COLOR_TYPE_GRAY) {
        for (png_uint_32 y = 0; y < h; ++y) {
            const unsigned char* row = data.data() + y * rowbytes;
            for (png_uint_32 x = 0; x < w; ++x) {
                img.at(static_cast<int>(x), static_cast<int>(y)) = row[x] / 255.0;
            }
        }
    } else {
        for (png_uint_32 y = 0; y < h; ++y) {
            const unsigned char* row = data.data() + y * rowbytes;
            for (png_uint_32 x = 0; x < w; ++x) {
                img.at(static_cast<int>(x), static_cast<int>(y)) =
                    luma601(row[3 * x], row[3 * x + 1], row[3 * x + 2]);
            }
        }
    }
    return img;
}

void save_png(const LumaImage& img, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw IoError("cannot open '" + path + "' for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_longjmp,
                                              png_warning_ignore);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw IoError("libpng initialization failed for '" + path + "'");
    }

    std::vector<unsigned char> bytes(img.size());
    std::vector<png_bytep> rows(img.height());
    for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = quantize_sample(img[i]);
    for (int y = 0; y < img.height(); ++y) {
        rows[y] = bytes.data() + static_cast<std::size_t>(y) * img.width();
    }

    const bool ok = png_write_guarded(png, info, fp, rows.data(), img.width(), img.height());
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    if (!ok) throw IoError("failed writing PNG '" + path + "'");
}

} // namespace

unsigned char quantize_sample(double v) {
    const double clamped = std::clamp(v, 0.0, 1.0);
    return static_cast<unsigned char>(std::floor(clamped * 255.0 + 0.5));
}

LumaImage quantize_to_8bit(const LumaImage& img) {
    LumaImage out(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i) out[i] = quantize_sample(img[i]) / 255.0;
    return out;
}

LumaImage load_image(const std::string& path) {
    const std::string ext = lower_ext(path);
    if (ext == ".pgm") return load_pgm(path);
    if (ext == ".png") return load_png(path);
    throw FormatError("unsupported raster format '" + ext + "' for '" + path +
                      "' (expected .pgm or .png)");
}

void save_image(const LumaImage& img, const std::string& path) {
    const std::string ext = lower_ext(path);
    if (ext == ".pgm") return save_pgm(img, path);
    if (ext == ".png") return save_png(img, path);
    throw FormatError("unsupported raster format '" + ext + "' for '" + path +
                      "' (expected .pgm or .png)");
}

void export_gradient_image(const GradientField& field, const std::string& path) {
    double lo = field[0];
    double hi = field[0];
    for (std::size_t i = 1; i < field.size(); ++i) {
        lo = std::min(lo, field[i]);
        hi = std::max(hi, field[i]);
    }
    LumaImage vis(field.width(), field.height());
    if (hi > lo) {
        const double scale = 1.0 / (hi - lo);
        for (std::size_t i = 0; i < field.size(); ++i) vis[i] = (field[i] - lo) * scale;
    }
    save_image(vis, path);
}

void export_gradient_csv(const GradientField& field, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    for (int y = 0; y < field.height(); ++y) {
        for (int x = 0; x < field.width(); ++x) {
            if (x) out << ',';
            out << detail::fmt_double(field.at(x, y));
        }
        out << '\n';
    }
    if (!out) throw IoError("failed writing '" + path + "'");
}

} // namespace sharpq
