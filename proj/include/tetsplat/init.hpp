#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "renderer.hpp"
#include "types.hpp"

namespace tetsplat
{
    /// Axis-aligned scene box; the default is the normalized cube [-1,1]^3.
    struct SceneBounds
    {
        Vec3 min = Vec3::Constant(-1.0);
        Vec3 max = Vec3::Constant(1.0);
    };

    /**
     * Regular lattice of cubic voxels. Voxel (i, j, k) has its center at
     * origin + (i + 0.5, j + 0.5, k + 0.5) * spacing; x varies fastest in storage.
     */
    struct VoxelGrid
    {
        Vec3 origin = Vec3::Zero();
        double spacing = 1.0;
        std::array<int, 3> dims = {0, 0, 0};
        std::vector<std::uint8_t> occupancy;
        std::vector<double> distance; // scene units; 0 on unoccupied voxels
        std::string warning;          // set when carving left nothing

        VoxelGrid() = default;
        VoxelGrid(const Vec3 & origin, double spacing, std::array<int, 3> dims);

        std::size_t size() const { return occupancy.size(); }
        std::size_t index(int i, int j, int k) const
        {
            return (static_cast<std::size_t>(k) * dims[1] + j) * dims[0] + i;
        }
        std::array<int, 3> coords(std::size_t index) const;
        Vec3 center(int i, int j, int k) const;
        Vec3 center(std::size_t index) const;
        bool occupied(std::size_t index) const { return occupancy[index] != 0; }
        std::size_t occupied_count() const;
    };

    /**
     * Voxels of the box with `resolution` cells along its longest axis (fewer
     * along shorter ones). A voxel is occupied iff its center is in front of
     * every camera, projects inside every image and lands on a pixel whose mask
     * value exceeds 0.5.
     */
    VoxelGrid carve_visual_hull(std::span<const View> views, int resolution, const SceneBounds & bounds = {});

    /// Exact Euclidean distance from each occupied voxel center to the nearest
    /// unoccupied center, cells outside the grid counting as unoccupied.
    void distance_transform(VoxelGrid & grid);

    /**
     * Candidate points with radii and a sparse coverage matrix. Column i lists the
     * candidates j with |p_j - p_i| <= radius_i, i.e. D[j][i] = 1.
     */
    struct CoverageProblem
    {
        std::vector<Vec3> candidates;
        std::vector<double> radii;
        std::vector<std::vector<int>> columns; // ascending row indices

        std::size_t size() const { return columns.size(); }
        bool covers(std::size_t column, std::size_t row) const;

        /// Square 0/1 matrix D indexed D[row][column].
        static CoverageProblem from_matrix(const std::vector<std::vector<int>> & d);
        std::vector<std::vector<int>> dense() const;
    };

    class InfeasibleCoverError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Candidates are the occupied voxel centers, radius_i = alpha * distance_i + beta.
    CoverageProblem build_coverage_problem(const VoxelGrid & grid, double alpha, double beta);

    /// True iff every row is covered by a selected column.
    bool is_cover(const CoverageProblem & problem, std::span<const int> selection);

    /**
     * Greedy cover: repeatedly take the column covering the most uncovered rows,
     * lowest index first on ties. Returns sorted indices. Throws
     * InfeasibleCoverError if some row is in no column.
     */
    std::vector<int> solve_set_cover_greedy(const CoverageProblem & problem);

    /**
     * Minimum-cardinality cover by enumerating subsets in order of size; the first
     * (lexicographically smallest) optimum is returned. Refuses m > max_m with
     * std::invalid_argument.
     */
    std::vector<int> solve_set_cover_exact(const CoverageProblem & problem, std::size_t max_m = 20);

    struct InitConfig
    {
        int grid_resolution = 64;
        double alpha = 1.2;
        double beta = 0.07;
        SceneBounds bounds;
    };

    struct InitResult
    {
        std::vector<Vec3> centers;
        std::vector<double> radii;
        std::size_t candidate_count = 0;
        std::string warning;
    };

    /// carve -> distance transform -> coverage -> greedy cover.
    InitResult initialize_spheres(std::span<const View> views, const InitConfig & config);

    /// {alpha, beta, grid_resolution, spheres: [{center: [x, y, z], radius}]}
    void write_init_file(const InitResult & result, const InitConfig & config, const std::filesystem::path & path);
    InitResult read_init_file(const std::filesystem::path & path);
}
