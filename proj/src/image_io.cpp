#include "stormcast/image_io.hpp"

#include <csetjmp>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#include "stormcast/errors.hpp"

namespace stormcast {

namespace {

std::string read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read image: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

double luma(double r, double g, double b) { return 0.299 * r + 0.587 * g + 0.114 * b; }

// ---- PNG ----

struct PngReadState {
    const unsigned char* data;
    size_t size;
    size_t pos;
};

void png_mem_read(png_structp png, png_bytep out, png_size_t len) {
    auto* st = static_cast<PngReadState*>(png_get_io_ptr(png));
    if (st->pos + len > st->size) png_error(png, "truncated PNG");
    std::memcpy(out, st->data + st->pos, len);
    st->pos += len;
}

GrayImage decode_png(const std::string& bytes, const std::string& origin) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw DataError("png init failed: " + origin);
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw DataError("png init failed: " + origin);
    }

    std::vector<png_bytep> row_ptrs;
    std::vector<unsigned char> buffer;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DataError("corrupt PNG: " + origin);
    }

    PngReadState st{reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), 0};
    png_set_read_fn(png, &st, png_mem_read);
    png_read_info(png, info);

    // Normalize every variant to 8-bit RGB or gray.
    png_set_strip_16(png);
    png_set_packing(png);
    png_set_expand(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const png_byte channels = png_get_channels(png, info);
    if (w == 0 || h == 0 || (channels != 1 && channels != 3)) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DataError("unsupported PNG layout: " + origin);
    }

    const size_t rowbytes = png_get_rowbytes(png, info);
    buffer.resize(rowbytes * h);
    row_ptrs.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) row_ptrs[y] = buffer.data() + y * rowbytes;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    GrayImage img(static_cast<int>(w), static_cast<int>(h));
    for (png_uint_32 y = 0; y < h; ++y) {
        const unsigned char* row = buffer.data() + y * rowbytes;
        for (png_uint_32 x = 0; x < w; ++x) {
            if (channels == 1)
                img.at(int(x), int(y)) = row[x];
            else
                img.at(int(x), int(y)) = luma(row[3 * x], row[3 * x + 1], row[3 * x + 2]);
        }
    }
    return img;
}

// ---- JPEG ----

struct JpegErrorMgr {
    jpeg_error_mgr base;
    std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    longjmp(mgr->jump, 1);
}

GrayImage decode_jpeg(const std::string& bytes, const std::string& origin) {
    jpeg_decompress_struct cinfo;
    JpegErrorMgr err;
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_exit;

    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw DataError("corrupt JPEG: " + origin);
    }

    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, reinterpret_cast<const unsigned char*>(bytes.data()),
                 static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_GRAYSCALE; // libjpeg applies the luma weights
    jpeg_start_decompress(&cinfo);

    const int w = static_cast<int>(cinfo.output_width);
    const int h = static_cast<int>(cinfo.output_height);
    GrayImage img(w, h);
    std::vector<unsigned char> row(static_cast<size_t>(w) * cinfo.output_components);
    unsigned char* rowp = row.data();
    while (cinfo.output_scanline < cinfo.output_height) {
        const int y = static_cast<int>(cinfo.output_scanline);
        jpeg_read_scanlines(&cinfo, &rowp, 1);
        for (int x = 0; x < w; ++x) img.at(x, y) = row[static_cast<size_t>(x)];
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return img;
}

bool looks_png(const std::string& b) {
    static const unsigned char sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    return b.size() >= 8 && std::memcmp(b.data(), sig, 8) == 0;
}

bool looks_jpeg(const std::string& b) {
    return b.size() >= 3 && static_cast<unsigned char>(b[0]) == 0xff &&
           static_cast<unsigned char>(b[1]) == 0xd8 &&
           static_cast<unsigned char>(b[2]) == 0xff;
}

bool looks_pgm(const std::string& b) {
    return b.size() >= 2 && b[0] == 'P' && (b[1] == '5' || b[1] == '2');
}

GrayImage decode_pgm(const std::string& bytes, const std::string& origin);

} // namespace

GrayImage decode_image(const std::string& bytes, const std::string& origin, int working_size) {
    GrayImage img;
    if (looks_png(bytes))
        img = decode_png(bytes, origin);
    else if (looks_jpeg(bytes))
        img = decode_jpeg(bytes, origin);
    else if (looks_pgm(bytes))
        img = decode_pgm(bytes, origin);
    else
        throw DataError("unsupported image format: " + origin);

    if (working_size > 0 && (img.width() != working_size || img.height() != working_size))
        img = resample_area(img, working_size, working_size);
    return img;
}

GrayImage load_image(const std::filesystem::path& path, int working_size) {
    return decode_image(read_file_bytes(path), path.string(), working_size);
}

GrayImage resample_area(const GrayImage& img, int out_width, int out_height) {
    if (img.empty()) throw DataError("empty image");
    if (out_width <= 0 || out_height <= 0)
        throw std::invalid_argument("output dimensions must be positive");

    GrayImage out(out_width, out_height);
    const double sx = double(img.width()) / out_width;
    const double sy = double(img.height()) / out_height;

    for (int oy = 0; oy < out_height; ++oy) {
        const double y0 = oy * sy;
        const double y1 = (oy + 1) * sy;
        for (int ox = 0; ox < out_width; ++ox) {
            const double x0 = ox * sx;
            const double x1 = (ox + 1) * sx;

            double acc = 0.0;
            for (int y = int(std::floor(y0)); y < int(std::ceil(y1)); ++y) {
                const double wy = std::min<double>(y + 1, y1) - std::max<double>(y, y0);
                if (wy <= 0.0) continue;
                for (int x = int(std::floor(x0)); x < int(std::ceil(x1)); ++x) {
                    const double wx = std::min<double>(x + 1, x1) - std::max<double>(x, x0);
                    if (wx <= 0.0) continue;
                    acc += wx * wy * img.at_clamped(x, y);
                }
            }
            out.at(ox, oy) = acc / (sx * sy);
        }
    }
    return out;
}

namespace {

unsigned char quantize(double v) {
    return static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 255.0)));
}

void write_png_gray8(const std::filesystem::path& path, int w, int h,
                     const std::vector<unsigned char>& gray) {
    std::FILE* fp = std::fopen(path.string().c_str(), "wb");
    if (!fp) throw DataError("cannot write: " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info || setjmp(png_jmpbuf(png))) {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
        std::fclose(fp);
        throw DataError("png write failed: " + path.string());
    }

    png_init_io(png, fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < h; ++y)
        png_write_row(png, const_cast<png_bytep>(gray.data() + static_cast<size_t>(y) * w));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

} // namespace

void write_png(const std::filesystem::path& path, const GrayImage& img) {
    std::vector<unsigned char> gray(img.size());
    for (size_t i = 0; i < img.size(); ++i) gray[i] = quantize(img.pixels()[i]);
    write_png_gray8(path, img.width(), img.height(), gray);
}

void write_png_normalized(const std::filesystem::path& path, const GrayImage& img) {
    double peak = 0.0;
    for (double v : img.pixels()) peak = std::max(peak, v);
    const double scale = peak > 0.0 ? 255.0 / peak : 0.0;
    std::vector<unsigned char> gray(img.size());
    for (size_t i = 0; i < img.size(); ++i) gray[i] = quantize(img.pixels()[i] * scale);
    write_png_gray8(path, img.width(), img.height(), gray);
}

void write_png(const std::filesystem::path& path, const BinaryImage& img) {
    std::vector<unsigned char> gray(img.bits().size());
    for (size_t i = 0; i < gray.size(); ++i) gray[i] = img.bits()[i] ? 255 : 0;
    write_png_gray8(path, img.width(), img.height(), gray);
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write: " + path.string());
    out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    for (double v : img.pixels()) out.put(static_cast<char>(quantize(v)));
    if (!out) throw DataError("short write: " + path.string());
}

namespace {

GrayImage decode_pgm(const std::string& bytes, const std::string& origin) {
    std::istringstream in(bytes);
    std::string magic;
    in >> magic;
    if (magic != "P5" && magic != "P2") throw DataError("unsupported image format: " + origin);

    auto next_token = [&in]() -> std::string {
        std::string tok;
        while (in >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return tok;
        }
        return {};
    };

    int w = 0, h = 0, maxval = 0;
    try {
        w = std::stoi(next_token());
        h = std::stoi(next_token());
        maxval = std::stoi(next_token());
    } catch (const std::exception&) {
        throw DataError("corrupt PGM header: " + origin);
    }
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255)
        throw DataError("corrupt PGM header: " + origin);

    GrayImage img(w, h);
    if (magic == "P5") {
        const size_t start = static_cast<size_t>(in.tellg()) + 1; // single whitespace after maxval
        if (bytes.size() < start + img.size()) throw DataError("truncated PGM: " + origin);
        for (size_t i = 0; i < img.size(); ++i)
            img.pixels()[i] = static_cast<unsigned char>(bytes[start + i]);
    } else {
        for (size_t i = 0; i < img.size(); ++i) {
            int v;
            if (!(in >> v)) throw DataError("truncated PGM: " + origin);
            img.pixels()[i] = v;
        }
    }
    return img;
}

} // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
    const std::string bytes = read_file_bytes(path);
    if (!looks_pgm(bytes)) throw DataError("unsupported image format: " + path.string());
    return decode_pgm(bytes, path.string());
}

} // namespace stormcast
