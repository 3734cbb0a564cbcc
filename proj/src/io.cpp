#include "neundiff/io.hpp"

#include <png.h>
#include <tiffio.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

namespace neundiff {

namespace {

constexpr double k16To8 = 255.0 / 65535.0;

// Delta form of 0.299R + 0.587G + 0.114B; exact on gray pixels, which the
// plain weighted sum is not in double arithmetic.
double luminance(double r, double g, double b) {
    return r + 0.587 * (g - r) + 0.114 * (b - r);
}

double reduce_rgb(double r, double g, double b, GrayMode mode) {
    switch (mode) {
        case GrayMode::luminance: return luminance(r, g, b);
        case GrayMode::r: return r;
        case GrayMode::g: return g;
        case GrayMode::b: return b;
    }
    return luminance(r, g, b);
}

enum class FileKind { png, tiff, unknown };

FileKind sniff(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path.string() + "' for reading");
    unsigned char magic[8] = {};
    f.read(reinterpret_cast<char*>(magic), 8);
    static const unsigned char png_magic[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    if (f.gcount() >= 8 && std::memcmp(magic, png_magic, 8) == 0) return FileKind::png;
    if (f.gcount() >= 4 && ((magic[0] == 'I' && magic[1] == 'I' && magic[2] == 42 && magic[3] == 0) ||
                            (magic[0] == 'M' && magic[1] == 'M' && magic[2] == 0 && magic[3] == 42)))
        return FileKind::tiff;
    return FileKind::unknown;
}

FileKind kind_from_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png") return FileKind::png;
    if (ext == ".tif" || ext == ".tiff") return FileKind::tiff;
    return FileKind::unknown;
}

struct PngReadCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;
    ~PngReadCtx() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

Raster load_png(const std::filesystem::path& path, GrayMode mode) {
    PngReadCtx c;
    c.fp = std::fopen(path.string().c_str(), "rb");
    if (!c.fp) throw IoError("cannot open '" + path.string() + "' for reading");
    c.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    c.info = png_create_info_struct(c.png);
    if (!c.png || !c.info) throw IoError("libpng initialization failed");
    if (setjmp(png_jmpbuf(c.png))) throw IoError("failed to decode PNG '" + path.string() + "'");

    png_init_io(c.png, c.fp);
    png_read_info(c.png, c.info);

    const png_uint_32 w = png_get_image_width(c.png, c.info);
    const png_uint_32 h = png_get_image_height(c.png, c.info);
    const int depth = png_get_bit_depth(c.png, c.info);
    const int color = png_get_color_type(c.png, c.info);

    const bool gray = color == PNG_COLOR_TYPE_GRAY && (depth == 8 || depth == 16);
    const bool rgb = color == PNG_COLOR_TYPE_RGB && depth == 8;
    if (!gray && !rgb)
        throw FormatError("unsupported PNG (need 8/16-bit gray or 8-bit RGB): '" + path.string() + "'");
    if (depth == 16) png_set_swap(c.png); // PNG stores 16-bit big-endian
    png_set_interlace_handling(c.png);
    png_read_update_info(c.png, c.info);

    Raster out(static_cast<int>(w), static_cast<int>(h));
    const size_t rowbytes = png_get_rowbytes(c.png, c.info);
    std::vector<unsigned char> row_data(rowbytes * h);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = row_data.data() + y * rowbytes;
    png_read_image(c.png, rows.data());
    png_read_end(c.png, nullptr);

    for (png_uint_32 y = 0; y < h; ++y) {
        const unsigned char* src = rows[y];
        for (png_uint_32 x = 0; x < w; ++x) {
            double v;
            if (rgb) {
                v = reduce_rgb(src[3 * x], src[3 * x + 1], src[3 * x + 2], mode);
            } else if (depth == 16) {
                uint16_t s;
                std::memcpy(&s, src + 2 * x, 2);
                v = s * k16To8;
            } else {
                v = src[x];
            }
            out.at(static_cast<int>(x), static_cast<int>(y)) = v;
        }
    }
    return out;
}

struct PngWriteCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;
    ~PngWriteCtx() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        if (fp) std::fclose(fp);
    }
};

unsigned char quantize(double v) {
    // round half-up; inputs are already in [0,255]
    double q = std::floor(v + 0.5);
    if (q < 0.0) q = 0.0;
    if (q > 255.0) q = 255.0;
    return static_cast<unsigned char>(q);
}

void save_png(const Raster& r, const std::filesystem::path& path) {
    PngWriteCtx c;
    c.fp = std::fopen(path.string().c_str(), "wb");
    if (!c.fp) throw IoError("cannot open '" + path.string() + "' for writing");
    c.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    c.info = png_create_info_struct(c.png);
    if (!c.png || !c.info) throw IoError("libpng initialization failed");
    if (setjmp(png_jmpbuf(c.png))) throw IoError("failed to write PNG '" + path.string() + "'");

    png_init_io(c.png, c.fp);
    png_set_IHDR(c.png, c.info, r.width(), r.height(), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(c.png, c.info);

    std::vector<unsigned char> row(r.width());
    for (int y = 0; y < r.height(); ++y) {
        for (int x = 0; x < r.width(); ++x) row[x] = quantize(r.at(x, y));
        png_write_row(c.png, row.data());
    }
    png_write_end(c.png, nullptr);
}

struct TiffCloser {
    void operator()(TIFF* t) const { if (t) TIFFClose(t); }
};
using TiffPtr = std::unique_ptr<TIFF, TiffCloser>;

Raster load_tiff(const std::filesystem::path& path, GrayMode mode) {
    TIFFSetWarningHandler(nullptr);
    TiffPtr tif(TIFFOpen(path.string().c_str(), "r"));
    if (!tif) throw IoError("cannot open '" + path.string() + "' for reading");

    uint32_t w = 0, h = 0;
    uint16_t depth = 0, spp = 0, photometric = 0, planar = PLANARCONFIG_CONTIG;
    TIFFGetField(tif.get(), TIFFTAG_IMAGEWIDTH, &w);
    TIFFGetField(tif.get(), TIFFTAG_IMAGELENGTH, &h);
    TIFFGetFieldDefaulted(tif.get(), TIFFTAG_BITSPERSAMPLE, &depth);
    TIFFGetFieldDefaulted(tif.get(), TIFFTAG_SAMPLESPERPIXEL, &spp);
    TIFFGetFieldDefaulted(tif.get(), TIFFTAG_PHOTOMETRIC, &photometric);
    TIFFGetFieldDefaulted(tif.get(), TIFFTAG_PLANARCONFIG, &planar);

    const bool gray = spp == 1 && (depth == 8 || depth == 16) && photometric == PHOTOMETRIC_MINISBLACK;
    const bool rgb = spp == 3 && depth == 8 && photometric == PHOTOMETRIC_RGB;
    if (!gray && !rgb)
        throw FormatError("unsupported TIFF (need 8/16-bit gray or 8-bit RGB): '" + path.string() + "'");
    if (planar != PLANARCONFIG_CONTIG || TIFFIsTiled(tif.get()))
        throw FormatError("unsupported TIFF layout (planar or tiled): '" + path.string() + "'");

    Raster out(static_cast<int>(w), static_cast<int>(h));
    std::vector<unsigned char> scanline(TIFFScanlineSize(tif.get()));
    for (uint32_t y = 0; y < h; ++y) {
        if (TIFFReadScanline(tif.get(), scanline.data(), y) < 0)
            throw IoError("failed to decode TIFF '" + path.string() + "'");
        for (uint32_t x = 0; x < w; ++x) {
            double v;
            if (rgb) {
                v = reduce_rgb(scanline[3 * x], scanline[3 * x + 1], scanline[3 * x + 2], mode);
            } else if (depth == 16) {
                uint16_t s;
                std::memcpy(&s, scanline.data() + 2 * x, 2);
                v = s * k16To8;
            } else {
                v = scanline[x];
            }
            out.at(static_cast<int>(x), static_cast<int>(y)) = v;
        }
    }
    return out;
}

void save_tiff(const Raster& r, const std::filesystem::path& path) {
    TiffPtr tif(TIFFOpen(path.string().c_str(), "w"));
    if (!tif) throw IoError("cannot open '" + path.string() + "' for writing");
    TIFFSetField(tif.get(), TIFFTAG_IMAGEWIDTH, static_cast<uint32_t>(r.width()));
    TIFFSetField(tif.get(), TIFFTAG_IMAGELENGTH, static_cast<uint32_t>(r.height()));
    TIFFSetField(tif.get(), TIFFTAG_BITSPERSAMPLE, 8);
    TIFFSetField(tif.get(), TIFFTAG_SAMPLESPERPIXEL, 1);
    TIFFSetField(tif.get(), TIFFTAG_PHOTOMETRIC, PHOTOMETRIC_MINISBLACK);
    TIFFSetField(tif.get(), TIFFTAG_PLANARCONFIG, PLANARCONFIG_CONTIG);
    TIFFSetField(tif.get(), TIFFTAG_COMPRESSION, COMPRESSION_NONE);
    TIFFSetField(tif.get(), TIFFTAG_ROWSPERSTRIP, 1);

    std::vector<unsigned char> row(r.width());
    for (int y = 0; y < r.height(); ++y) {
        for (int x = 0; x < r.width(); ++x) row[x] = quantize(r.at(x, y));
        if (TIFFWriteScanline(tif.get(), row.data(), y) < 0)
            throw IoError("failed to write TIFF '" + path.string() + "'");
    }
}

long parse_nonneg_int(const std::string& field, long line_no, const char* what) {
    long v = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw ParseError(std::string("malformed ") + what + " value '" + field + "'", line_no);
    if (v < 0) throw ParseError(std::string(what) + " must be non-negative, got '" + field + "'", line_no);
    return v;
}

} // namespace

GrayMode gray_mode_from_string(const std::string& s) {
    if (s == "luminance") return GrayMode::luminance;
    if (s == "r") return GrayMode::r;
    if (s == "g") return GrayMode::g;
    if (s == "b") return GrayMode::b;
    throw ValidationError("unknown gray mode '" + s + "' (expected luminance|r|g|b)");
}

std::string to_string(GrayMode m) {
    switch (m) {
        case GrayMode::luminance: return "luminance";
        case GrayMode::r: return "r";
        case GrayMode::g: return "g";
        case GrayMode::b: return "b";
    }
    return "luminance";
}

Raster load_raster(const std::filesystem::path& path, GrayMode mode) {
    switch (sniff(path)) {
        case FileKind::png: return load_png(path, mode);
        case FileKind::tiff: return load_tiff(path, mode);
        default:
            throw FormatError("unrecognized raster format (expected PNG or TIFF): '" + path.string() + "'");
    }
}

void save_raster(const Raster& r, const std::filesystem::path& path) {
    for (double v : r.values())
        if (!(v >= 0.0 && v <= 255.0))
            throw ValidationError("raster value " + std::to_string(v) + " outside [0,255] on save");
    switch (kind_from_extension(path)) {
        case FileKind::png: save_png(r, path); break;
        case FileKind::tiff: save_tiff(r, path); break;
        default:
            throw FormatError("cannot infer output format from extension: '" + path.string() + "'");
    }
}

PointSet load_points(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path.string() + "' for reading");

    PointSet ps;
    ps.source_label = path.stem().string();

    std::string line;
    long line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1) {
            if (line != "x,y") throw ParseError("expected header 'x,y', got '" + line + "'", line_no);
            continue;
        }
        if (line.empty() && f.eof()) break;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw ParseError("expected 'x,y' pair, got '" + line + "'", line_no);
        long x = parse_nonneg_int(line.substr(0, comma), line_no, "x");
        long y = parse_nonneg_int(line.substr(comma + 1), line_no, "y");
        ps.points.push_back({static_cast<int>(x), static_cast<int>(y)});
    }
    ps.check_no_duplicates();
    return ps;
}

void save_points(const PointSet& ps, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    f << "x,y\n";
    for (const Point& p : ps.points) f << p.x << ',' << p.y << '\n';
    if (!f) throw IoError("failed writing '" + path.string() + "'");
}

Raster downsample2x2(const Raster& r) {
    const int w = r.width() / 2;
    const int h = r.height() / 2;
    if (w == 0 || h == 0) throw ValidationError("raster too small to downsample 2x2");
    Raster out(w, h, 0.0, r.spacing() * 2.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            out.at(x, y) = 0.25 * (r.at(2 * x, 2 * y) + r.at(2 * x + 1, 2 * y) +
                                   r.at(2 * x, 2 * y + 1) + r.at(2 * x + 1, 2 * y + 1));
    return out;
}

} // namespace neundiff
