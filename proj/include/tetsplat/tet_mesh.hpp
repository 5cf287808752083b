#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "types.hpp"

namespace tetsplat
{
    /// Triangle surface. face_normals is either empty or one unit normal per face.
    struct SurfaceMesh
    {
        std::vector<Vec3> vertices;
        std::vector<Tri> faces;
        std::vector<Vec3> face_normals;

        std::size_t num_vertices() const { return vertices.size(); }
        std::size_t num_faces() const { return faces.size(); }
        bool empty() const { return faces.empty(); }

        /// Throws std::invalid_argument on out-of-range or repeated face indices.
        void validate() const;

        /// Unit normals from the winding; degenerate faces get the zero vector.
        std::vector<Vec3> compute_face_normals() const;
    };

    /**
     * Tetrahedral mesh with fixed connectivity.
     *
     * The rest configuration is captured at construction (it must have strictly
     * positive signed volumes) together with the per-tet inverse edge matrices.
     * Afterwards only the current vertex positions may change.
     */
    class TetMesh
    {
    public:
        TetMesh(std::vector<Vec3> rest_vertices, std::vector<Tet> tets);

        std::size_t num_vertices() const { return vertices_.size(); }
        std::size_t num_tets() const { return tets_.size(); }

        const std::vector<Vec3> & vertices() const { return vertices_; }
        const std::vector<Vec3> & rest_vertices() const { return rest_; }
        const std::vector<Tet> & tets() const { return tets_; }
        const std::vector<Mat3> & rest_inverse() const { return rest_inverse_; }

        /// Replace current positions; the count must match.
        void set_vertices(std::vector<Vec3> vertices);

    private:
        std::vector<Vec3> rest_;
        std::vector<Vec3> vertices_;
        std::vector<Tet> tets_;
        std::vector<Mat3> rest_inverse_;
    };

    /// Unshared tet faces, oriented outward, over a compacted vertex set.
    struct BoundaryTopology
    {
        std::vector<Tri> faces;      // indices into vertex_ids
        std::vector<int> vertex_ids; // surface vertex -> tet-mesh vertex, ascending
    };

    BoundaryTopology extract_boundary(std::span<const Tet> tets);

    /// Signed volume det([b-a, c-a, d-a]) / 6 of every tetrahedron.
    std::vector<double> signed_volumes(std::span<const Vec3> positions, std::span<const Tet> tets);
    std::vector<double> signed_volumes(const TetMesh & mesh);

    /**
     * Tetrahedral unit ball: a (2*resolution)^3 lattice on [-1,1]^3, six
     * tetrahedra per cell split along the cell's main diagonal, with vertices
     * pushed onto the ball by the cube-to-sphere map
     * x' = x*sqrt(1 - y^2/2 - z^2/2 + y^2 z^2/3) (and cyclic).
     */
    TetMesh generate_unit_tetsphere(int resolution);

    /// Boundary surface of the mesh at its current positions.
    SurfaceMesh boundary_faces(const TetMesh & mesh);

    /**
     * M TetSpheres sharing one connectivity. Vertex i of sphere k sits at flat
     * index k*N + i in the stacked position vector of length 3*N*M.
     */
    class TetSphereSet
    {
    public:
        TetSphereSet(std::vector<TetMesh> spheres, std::vector<Vec3> centers, std::vector<double> radii);

        std::size_t size() const { return spheres_.size(); }
        std::size_t vertices_per_sphere() const { return spheres_.front().num_vertices(); }
        std::size_t tets_per_sphere() const { return spheres_.front().num_tets(); }
        std::size_t total_vertices() const { return size() * vertices_per_sphere(); }
        std::size_t total_tets() const { return size() * tets_per_sphere(); }

        const std::vector<TetMesh> & spheres() const { return spheres_; }
        const TetMesh & sphere(std::size_t k) const { return spheres_.at(k); }
        const std::vector<Vec3> & centers() const { return centers_; }
        const std::vector<double> & radii() const { return radii_; }

        /// Shared connectivity (identical for every sphere).
        const std::vector<Tet> & tets() const { return spheres_.front().tets(); }

        Eigen::VectorXd positions() const;
        Eigen::VectorXd rest_positions() const;
        void set_positions(const Eigen::VectorXd & x);

    private:
        std::vector<TetMesh> spheres_;
        std::vector<Vec3> centers_;
        std::vector<double> radii_;
    };

    /// Sphere k gets vertices center_k + radius_k * template vertex (as its rest state).
    TetSphereSet instantiate_spheres(const TetMesh & tmpl, std::span<const Vec3> centers,
                                     std::span<const double> radii);

    /// Concatenated boundary connectivity of a TetSphereSet.
    struct UnionTopology
    {
        std::vector<Tri> faces;
        std::vector<int> vertex_ids; // surface vertex -> flat vertex index (k*N + i)
        std::size_t faces_per_sphere = 0;
        std::size_t vertices_per_sphere = 0;

        SurfaceMesh surface(const Eigen::VectorXd & flat_positions) const;
    };

    UnionTopology union_topology(const TetSphereSet & set);

    /// Concatenation of per-sphere boundary surfaces (no boolean union).
    SurfaceMesh union_surfaces(const TetSphereSet & set);

    /// Helpers between std::vector<Vec3> and the stacked 3N layout.
    Eigen::VectorXd flatten(std::span<const Vec3> points);
    std::vector<Vec3> unflatten(const Eigen::VectorXd & x);
}
