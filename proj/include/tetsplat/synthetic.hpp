#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "renderer.hpp"
#include "tet_mesh.hpp"
#include "view_io.hpp"

namespace tetsplat
{
    /// Subdivided icosahedron projected onto the sphere, outward winding.
    SurfaceMesh make_icosphere(const Vec3 & center, double radius, int subdivisions);

    /// Torus around the z axis, major radius R (tube center), minor radius r.
    SurfaceMesh make_torus(double major, double minor, int major_segments, int minor_segments);

    /// Axis-aligned box, two triangles per side, outward winding.
    SurfaceMesh make_box(const Vec3 & min, const Vec3 & max);

    /// Cameras on a Fibonacci sphere of the given radius, all looking at the origin.
    std::vector<Camera> fibonacci_cameras(int count, double distance, double fov_y_degrees, int width, int height);

    /// Targets rendered from a mesh: hard mask (depth hit), depth, camera-space normals.
    View render_target_view(const SurfaceMesh & surface, const Camera & camera, const RenderConfig & config = {});

    /**
     * Writes mask_XXX.png, depth_XXX.pfm, normal_XXX.pfm and cameras.json into dir
     * and returns the camera entries.
     */
    std::vector<CameraEntry> write_dataset(const std::filesystem::path & dir, std::span<const View> views);
}
