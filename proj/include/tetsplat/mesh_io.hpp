#pragma once

#include <filesystem>

#include "tet_mesh.hpp"

namespace tetsplat
{
    /// ASCII OBJ with "v x y z" and 1-based "f a b c" records (9 significant digits).
    void save_obj(const SurfaceMesh & mesh, const std::filesystem::path & path);

    /**
     * Reads "v" and "f" records; everything else is ignored. Face corners may use
     * the "v/vt/vn" forms and negative (relative) indices. Polygons with more than
     * three corners are fan-triangulated around their first corner:
     * (0,1,2), (0,2,3), ... Throws ParseError carrying the offending line number.
     */
    SurfaceMesh load_obj(const std::filesystem::path & path);

    /**
     * Tet sidecar format:
     *   tetmesh <N> <T>
     *   v x y z        (N lines)
     *   t a b c d      (T lines, 0-based)
     */
    void save_tet(std::span<const Vec3> vertices, std::span<const Tet> tets, const std::filesystem::path & path);
    void save_tet(const TetMesh & mesh, const std::filesystem::path & path);

    struct TetFile
    {
        std::vector<Vec3> vertices;
        std::vector<Tet> tets;
    };

    TetFile load_tet(const std::filesystem::path & path);
}
