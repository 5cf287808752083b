#pragma once

#include <filesystem>
#include <vector>

namespace tetsplat
{
    /**
     * Dense multi-channel image addressed by pixel coordinates (u, v): u is the
     * column, v the row in camera image space (v grows with camera +y).
     *
     * File IO stores rows top-down as usual, so PNG row r holds v = height-1-r and
     * pictures come out upright.
     */
    struct Image
    {
        int width = 0;
        int height = 0;
        int channels = 1;
        std::vector<double> data;

        Image() = default;
        Image(int w, int h, int c = 1, double fill = 0.0)
            : width(w), height(h), channels(c), data(static_cast<std::size_t>(w) * h * c, fill) {}

        std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
        std::size_t index(int u, int v, int c = 0) const
        {
            return (static_cast<std::size_t>(v) * width + u) * channels + c;
        }
        double & at(int u, int v, int c = 0) { return data[index(u, v, c)]; }
        double at(int u, int v, int c = 0) const { return data[index(u, v, c)]; }
        bool empty() const { return data.empty(); }
    };

    /**
     * PNG reader returning one channel in [0,1]. Gray images give their gray
     * value; images with alpha give the alpha channel; RGB gives the channel mean.
     * 8- and 16-bit depths are supported.
     */
    Image read_png_gray(const std::filesystem::path & path);

    /// Writes values clamped to [0,1] as 8- or 16-bit gray.
    void write_png_gray(const Image & image, const std::filesystem::path & path, int bit_depth = 8);

    /// Writes a 3-channel image with values in [0,1] as 8-bit RGB.
    void write_png_rgb(const Image & image, const std::filesystem::path & path);

    /// Portable float map, 1 ("Pf") or 3 ("PF") channels, little endian.
    Image read_pfm(const std::filesystem::path & path);
    void write_pfm(const Image & image, const std::filesystem::path & path);

    /**
     * Depth PNG encoding: 16-bit gray, stored value = round(depth * 1000), 0 marks
     * background. Depths beyond 65.535 scene units are clamped.
     */
    constexpr double kDepthPngScale = 1000.0;
    void write_depth_png(const Image & depth, double background, const std::filesystem::path & path);
    Image read_depth_png(const std::filesystem::path & path, double background);
}
