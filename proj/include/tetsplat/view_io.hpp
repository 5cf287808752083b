#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "renderer.hpp"

namespace tetsplat
{
    /// One entry of a camera file; image paths are stored as written.
    struct CameraEntry
    {
        Camera camera;
        std::string mask_path;
        std::string depth_path;  // empty when absent
        std::string normal_path; // empty when absent
    };

    /**
     * Camera file: a JSON list of
     *   {intrinsics: [9, row-major], world_to_camera: [16, row-major], width, height,
     *    mask_path, depth_path?, normal_path?}.
     * Throws IoError if the file is missing, ParseError on malformed content.
     */
    std::vector<CameraEntry> read_camera_file(const std::filesystem::path & path);
    void write_camera_file(const std::vector<CameraEntry> & entries, const std::filesystem::path & path);

    /**
     * Loads masks and optional depth/normal targets. Relative image paths resolve
     * against views_dir, or against the camera file's directory when views_dir is
     * empty. Depth: ".pfm" floats or 16-bit PNG (value / 1000, 0 = background).
     * Normals: 3-channel ".pfm", camera space.
     */
    std::vector<View> load_views(const std::filesystem::path & camera_file, const std::filesystem::path & views_dir,
                                 double background_depth = 0.0);

    Image read_depth_image(const std::filesystem::path & path, double background_depth);
}
