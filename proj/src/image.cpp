#include "tetsplat/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include <png.h>

#include "tetsplat/types.hpp"

namespace tetsplat
{
    namespace
    {
        struct FileCloser
        {
            void operator()(std::FILE * f) const { std::fclose(f); }
        };
        using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

        FilePtr open_file(const std::filesystem::path & path, const char * mode)
        {
            FilePtr f(std::fopen(path.string().c_str(), mode));
            if (!f)
                throw IoError("cannot open '" + path.string() + "'");
            return f;
        }

        void write_png(const std::filesystem::path & path, int width, int height, int color_type, int bit_depth,
                       const std::vector<std::uint8_t> & rows_bytes, std::size_t stride)
        {
            FilePtr f = open_file(path, "wb");
            png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
            png_infop info = png ? png_create_info_struct(png) : nullptr;
            if (!png || !info)
            {
                png_destroy_write_struct(&png, &info);
                throw IoError("libpng initialisation failed");
            }
            if (setjmp(png_jmpbuf(png)))
            {
                png_destroy_write_struct(&png, &info);
                throw IoError("PNG write to '" + path.string() + "' failed");
            }
            png_init_io(png, f.get());
            png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
                         PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
            png_write_info(png, info);
            for (int r = 0; r < height; ++r)
                png_write_row(png, const_cast<png_bytep>(rows_bytes.data() + stride * r));
            png_write_end(png, nullptr);
            png_destroy_write_struct(&png, &info);
        }

        std::uint16_t to_u16(double v) { return static_cast<std::uint16_t>(std::lround(std::clamp(v, 0.0, 1.0) * 65535.0)); }
        std::uint8_t to_u8(double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); }
    }

    Image read_png_gray(const std::filesystem::path & path)
    {
        FilePtr f = open_file(path, "rb");
        png_byte sig[8];
        if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
            throw ParseError(0, "'" + path.string() + "' is not a PNG file");

        png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        png_infop info = png ? png_create_info_struct(png) : nullptr;
        if (!png || !info)
        {
            png_destroy_read_struct(&png, &info, nullptr);
            throw IoError("libpng initialisation failed");
        }
        if (setjmp(png_jmpbuf(png)))
        {
            png_destroy_read_struct(&png, &info, nullptr);
            throw ParseError(0, "corrupt PNG '" + path.string() + "'");
        }
        png_init_io(png, f.get());
        png_set_sig_bytes(png, 8);
        png_read_info(png, info);

        const int color = png_get_color_type(png, info);
        const int depth = png_get_bit_depth(png, info);
        if (color == PNG_COLOR_TYPE_PALETTE)
            png_set_palette_to_rgb(png);
        if (color == PNG_COLOR_TYPE_GRAY && depth < 8)
            png_set_expand_gray_1_2_4_to_8(png);
        if (png_get_valid(png, info, PNG_INFO_tRNS))
            png_set_tRNS_to_alpha(png);
        if (depth == 16)
            png_set_swap(png); // host-order 16-bit samples
        png_read_update_info(png, info);

        const int width = static_cast<int>(png_get_image_width(png, info));
        const int height = static_cast<int>(png_get_image_height(png, info));
        const int channels = png_get_channels(png, info);
        const int out_depth = png_get_bit_depth(png, info);
        const int out_color = png_get_color_type(png, info);
        const std::size_t stride = png_get_rowbytes(png, info);
        std::vector<std::uint8_t> bytes(stride * height);
        std::vector<png_bytep> rows(height);
        for (int r = 0; r < height; ++r)
            rows[r] = bytes.data() + stride * r;
        png_read_image(png, rows.data());
        png_destroy_read_struct(&png, &info, nullptr);

        const double max_value = out_depth == 16 ? 65535.0 : 255.0;
        auto sample = [&](int r, int x, int c) -> double {
            const std::size_t i = static_cast<std::size_t>(x) * channels + c;
            if (out_depth == 16)
            {
                std::uint16_t s;
                std::memcpy(&s, rows[r] + 2 * i, 2);
                return s / max_value;
            }
            return rows[r][i] / max_value;
        };
        const bool has_alpha = (out_color & PNG_COLOR_MASK_ALPHA) != 0;

        Image image(width, height, 1);
        for (int r = 0; r < height; ++r)
            for (int x = 0; x < width; ++x)
            {
                double value;
                if (has_alpha)
                    value = sample(r, x, channels - 1);
                else if (channels >= 3)
                    value = (sample(r, x, 0) + sample(r, x, 1) + sample(r, x, 2)) / 3.0;
                else
                    value = sample(r, x, 0);
                image.at(x, height - 1 - r) = value;
            }
        return image;
    }

    void write_png_gray(const Image & image, const std::filesystem::path & path, int bit_depth)
    {
        if (bit_depth != 8 && bit_depth != 16)
            throw std::invalid_argument("write_png_gray: bit depth must be 8 or 16");
        const std::size_t stride = static_cast<std::size_t>(image.width) * (bit_depth / 8);
        std::vector<std::uint8_t> bytes(stride * image.height);
        for (int r = 0; r < image.height; ++r)
            for (int x = 0; x < image.width; ++x)
            {
                const double v = image.at(x, image.height - 1 - r, 0);
                std::uint8_t * dst = bytes.data() + stride * r;
                if (bit_depth == 8)
                    dst[x] = to_u8(v);
                else
                {
                    const std::uint16_t s = to_u16(v); // PNG is big endian
                    dst[2 * x] = static_cast<std::uint8_t>(s >> 8);
                    dst[2 * x + 1] = static_cast<std::uint8_t>(s & 0xff);
                }
            }
        write_png(path, image.width, image.height, PNG_COLOR_TYPE_GRAY, bit_depth, bytes, stride);
    }

    void write_png_rgb(const Image & image, const std::filesystem::path & path)
    {
        if (image.channels != 3)
            throw std::invalid_argument("write_png_rgb: image must have 3 channels");
        const std::size_t stride = static_cast<std::size_t>(image.width) * 3;
        std::vector<std::uint8_t> bytes(stride * image.height);
        for (int r = 0; r < image.height; ++r)
            for (int x = 0; x < image.width; ++x)
                for (int c = 0; c < 3; ++c)
                    bytes[stride * r + 3 * x + c] = to_u8(image.at(x, image.height - 1 - r, c));
        write_png(path, image.width, image.height, PNG_COLOR_TYPE_RGB, 8, bytes, stride);
    }

    Image read_pfm(const std::filesystem::path & path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw IoError("cannot open '" + path.string() + "'");
        std::string magic;
        int width = 0, height = 0;
        double scale = 0.0;
        in >> magic >> width >> height >> scale;
        in.get();
        if (!in || (magic != "Pf" && magic != "PF") || width <= 0 || height <= 0 || scale == 0.0)
            throw ParseError(0, "'" + path.string() + "' is not a valid PFM file");
        const int channels = magic == "PF" ? 3 : 1;
        const bool little = scale < 0.0;
        Image image(width, height, channels);
        std::vector<float> row(static_cast<std::size_t>(width) * channels);
        // PFM rows run bottom to top, i.e. in increasing v.
        for (int v = 0; v < height; ++v)
        {
            in.read(reinterpret_cast<char *>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(float)));
            if (!in)
                throw ParseError(0, "'" + path.string() + "' is truncated");
            for (std::size_t i = 0; i < row.size(); ++i)
            {
                float value = row[i];
                if (!little)
                {
                    std::uint32_t bits;
                    std::memcpy(&bits, &value, 4);
                    bits = __builtin_bswap32(bits);
                    std::memcpy(&value, &bits, 4);
                }
                image.data[static_cast<std::size_t>(v) * width * channels + i] = value;
            }
        }
        return image;
    }

    void write_pfm(const Image & image, const std::filesystem::path & path)
    {
        if (image.channels != 1 && image.channels != 3)
            throw std::invalid_argument("write_pfm: 1 or 3 channels required");
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw IoError("cannot open '" + path.string() + "' for writing");
        out << (image.channels == 3 ? "PF" : "Pf") << '\n' << image.width << ' ' << image.height << "\n-1.0\n";
        std::vector<float> buf(image.data.begin(), image.data.end());
        out.write(reinterpret_cast<const char *>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
        if (!out)
            throw IoError("write to '" + path.string() + "' failed");
    }

    void write_depth_png(const Image & depth, double background, const std::filesystem::path & path)
    {
        Image scaled(depth.width, depth.height, 1);
        for (std::size_t i = 0; i < depth.pixel_count(); ++i)
            scaled.data[i] = depth.data[i] == background ? 0.0 : depth.data[i] * kDepthPngScale / 65535.0;
        write_png_gray(scaled, path, 16);
    }

    Image read_depth_png(const std::filesystem::path & path, double background)
    {
        Image raw = read_png_gray(path);
        for (double & v : raw.data)
        {
            const double stored = std::round(v * 65535.0);
            v = stored == 0.0 ? background : stored / kDepthPngScale;
        }
        return raw;
    }
}
