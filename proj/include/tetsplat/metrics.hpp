#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tet_mesh.hpp"
#include "types.hpp"

namespace tetsplat
{
    /// Static 3D kd-tree for exact nearest-neighbour queries.
    class KdTree
    {
    public:
        explicit KdTree(std::span<const Vec3> points);

        /// Index of the nearest point and its squared distance; ties go to the
        /// lower index. The tree must not be empty.
        std::pair<int, double> nearest(const Vec3 & query) const;
        std::size_t size() const { return points_.size(); }

    private:
        struct Node
        {
            int begin, end;   // range in order_
            int left, right;  // children, -1 for leaves
            int axis;
            double split;
        };
        int build(int begin, int end);

        std::vector<Vec3> points_;
        std::vector<int> order_;
        std::vector<Node> nodes_;
    };

    /// Mean of (6/sqrt 3) A / (P h) per face, P the half-perimeter and h the
    /// longest edge; degenerate faces count as 0. Throws on an empty surface.
    double area_length_ratio(const SurfaceMesh & surface);

    /// Every edge in exactly two faces, a single closed fan around every vertex,
    /// no isolated vertices.
    bool manifoldness_check(const SurfaceMesh & surface);

    /// Face components under shared-edge adjacency; label per face when requested.
    std::size_t connected_components(const SurfaceMesh & surface, std::vector<int> * labels = nullptr);
    std::size_t cc_diff(const SurfaceMesh & recon, const SurfaceMesh & gt);

    struct SurfaceSamples
    {
        std::vector<Vec3> points;
        std::vector<Vec3> normals; // face normal of the source triangle
    };

    /// Area-weighted uniform samples, deterministic for a given seed.
    SurfaceSamples sample_surface_points(const SurfaceMesh & surface, std::size_t count, std::uint64_t seed);

    /// Distance from each point of a to its nearest neighbour in b.
    std::vector<double> nearest_distances(std::span<const Vec3> a, std::span<const Vec3> b);

    /// 0.5 (mean_a min_b |a - b| + mean_b min_a |a - b|), unsquared.
    double chamfer(std::span<const Vec3> a, std::span<const Vec3> b);

    /// Harmonic mean of precision (share of a within tau of b, strict) and recall.
    double f_score(std::span<const Vec3> a, std::span<const Vec3> b, double tau);

    /// Symmetrized mean |n . n'| between samples and their nearest samples on the other surface.
    double normal_consistency(const SurfaceMesh & a, const SurfaceMesh & b, std::size_t samples, std::uint64_t seed);

    /// Axis-aligned box of the vertices of both meshes.
    struct Box
    {
        Vec3 min, max;
    };

    /**
     * Inside test at the centers of a resolution^3 lattice over box: ray parity
     * along +x, evaluated per connected component and OR-ed, so overlapping
     * closed pieces count once.
     */
    std::vector<std::uint8_t> occupancy(const SurfaceMesh & surface, const Box & box, int resolution);

    struct IouResult
    {
        double iou = 0.0;
        std::string warning;
    };

    /// Occupancy IoU over the joint bounding box (padded by 1%).
    IouResult volume_iou(const SurfaceMesh & a, const SurfaceMesh & b, int resolution = 64);

    /**
     * Points on sharp edges: edges of two faces whose normals differ by more than
     * threshold_degrees. Points sit at (k + 0.5) / n along each edge with n
     * proportional to length, about `count` in total.
     */
    std::vector<Vec3> sharp_edge_points(const SurfaceMesh & surface, double threshold_degrees, std::size_t count);

    /// nullopt stands for "no-sharp-edges" (either side has none).
    std::optional<double> edge_chamfer(const SurfaceMesh & a, const SurfaceMesh & b, double threshold_degrees,
                                       std::size_t count);
    std::optional<double> edge_f_score(const SurfaceMesh & a, const SurfaceMesh & b, double threshold_degrees,
                                       double tau, std::size_t count);

    struct RigidTransform
    {
        Mat3 rotation = Mat3::Identity();
        Vec3 translation = Vec3::Zero();

        Vec3 apply(const Vec3 & p) const { return rotation * p + translation; }
    };

    struct IcpResult
    {
        RigidTransform transform; // maps source onto target
        int iterations = 0;
        double rmse = 0.0;
        std::string warning;
    };

    /**
     * Point-to-point ICP starting from centroid alignment; each iteration pairs
     * every source point with its nearest target and re-solves the orthogonal
     * Procrustes problem. Stops after max_iters or when the RMS error changes by
     * less than tol relative.
     */
    IcpResult icp_align(std::span<const Vec3> source, std::span<const Vec3> target, int max_iters = 50,
                        double tol = 1e-6);

    SurfaceMesh transformed(const SurfaceMesh & surface, const RigidTransform & t);

    struct MetricOptions
    {
        std::size_t samples = 100000;
        std::uint64_t seed = 0;
        double tau = -1.0; // <= 0: 1% of the ground-truth bounding-box diagonal
        double dihedral_degrees = 30.0;
        int iou_resolution = 64;
        bool icp = true;
    };

    struct MetricReport
    {
        double chamfer = 0.0;
        double vol_iou = 0.0;
        double alr = 0.0;
        bool manifold = false;
        std::size_t cc_count = 0;
        std::size_t cc_diff = 0;
        double f_score = 0.0;
        double normal_consistency = 0.0;
        std::optional<double> edge_chamfer;
        std::optional<double> edge_f_score;
        double tau = 0.0;
        std::vector<std::string> warnings;

        std::string to_json() const;
    };

    /// ICP-aligns recon onto gt (unless disabled) and evaluates every metric.
    MetricReport evaluate(const SurfaceMesh & recon, const SurfaceMesh & gt, const MetricOptions & options = {});
}
