#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "tet_mesh.hpp"
#include "types.hpp"

namespace tetsplat
{
    /**
     * Per-tet inverse rest edge matrix Dm^-1, where
     * Dm = [X1 - X0, X2 - X0, X3 - X0] for tet (X0, X1, X2, X3).
     *
     * Throws DegenerateTetError when |det Dm| <= 1e-12 * scale^3 (scale = longest
     * rest edge of that tet).
     */
    std::vector<Mat3> rest_inverses(std::span<const Vec3> rest, std::span<const Tet> tets);

    /// Flattened field of per-tet 3x3 deformation gradients, row-major per tet.
    class DeformationGradientField
    {
    public:
        DeformationGradientField() = default;
        explicit DeformationGradientField(std::size_t num_tets) : values_(Eigen::VectorXd::Zero(9 * num_tets)) {}
        explicit DeformationGradientField(std::span<const Mat3> gradients);

        std::size_t num_tets() const { return static_cast<std::size_t>(values_.size() / 9); }

        Mat3 operator[](std::size_t t) const;
        void set(std::size_t t, const Mat3 & f);

        const Eigen::VectorXd & flat() const { return values_; }
        Eigen::VectorXd & flat() { return values_; }

    private:
        Eigen::VectorXd values_;
    };

    /// F = Ds(x) * Dm^-1 for every tet; x holds one position per mesh vertex.
    DeformationGradientField deformation_gradients(std::span<const Vec3> x, const TetMesh & mesh);

    /// Stacked field over all spheres of a set; x is the flat 3NM position vector.
    DeformationGradientField deformation_gradients(const Eigen::VectorXd & x, const TetSphereSet & set);

    /**
     * Combinatorial face-adjacency Laplacian over tetrahedra: L_pq = -1 when tets
     * p and q share a triangle, L_pp = number of such neighbours. The 9x9 block
     * form is this scalar operator applied to each F component independently.
     *
     * A set of M spheres shares one connectivity, so the operator stores the
     * per-sphere adjacency once and repeats it block-diagonally; there is no
     * coupling across spheres.
     */
    class LaplacianOperator
    {
    public:
        LaplacianOperator() = default;
        LaplacianOperator(std::span<const Tet> tets, std::size_t blocks);

        std::size_t tets_per_block() const { return degree_.size(); }
        std::size_t blocks() const { return blocks_; }
        std::size_t size() const { return blocks_ * degree_.size(); }

        int degree(std::size_t local_tet) const { return degree_[local_tet]; }
        std::span<const int> neighbors(std::size_t local_tet) const;

        /// y = L f for a flat field of 9 components per tet.
        Eigen::VectorXd apply(const Eigen::VectorXd & field) const;

        /// Scalar MT x MT matrix (tests, small meshes).
        Eigen::SparseMatrix<double> scalar_matrix() const;

    private:
        std::vector<int> offsets_;
        std::vector<int> adjacency_;
        std::vector<int> degree_;
        std::size_t blocks_ = 0;
    };

    LaplacianOperator build_laplacian(std::span<const Tet> tets);
    LaplacianOperator build_laplacian(const TetSphereSet & set);

    /// ||L F||^2 summed over all 9 components of every tet.
    double biharmonic_energy(const DeformationGradientField & field, const LaplacianOperator & laplacian);

    /// sum over tets of min(0, det F)^2.
    double inversion_penalty(const DeformationGradientField & field);

    /// Number of tets with det F <= 0.
    std::size_t count_inverted(const DeformationGradientField & field);

    /// d det(F) / dF, finite for singular F.
    Mat3 cofactor(const Mat3 & f);

    struct GeometricEnergy
    {
        double biharmonic = 0.0; // unweighted ||L F||^2
        double penalty = 0.0;    // unweighted inversion penalty
        std::size_t inverted = 0;
        Eigen::VectorXd gradient; // d(w1*biharmonic + w2*penalty)/dx
    };

    /**
     * Value and analytic gradient of w1 ||L F_x||^2 + w2 sum min(0, det F)^2.
     * The field is linear in x, so the first term pulls 2 L^T L F back through
     * Dm^-T per tet; the second uses cofactors.
     */
    GeometricEnergy geometric_energy(const Eigen::VectorXd & x, const TetSphereSet & set,
                                     const LaplacianOperator & laplacian, double w1, double w2);

    Eigen::VectorXd geometric_energy_gradient(const Eigen::VectorXd & x, const TetSphereSet & set,
                                              const LaplacianOperator & laplacian, double w1, double w2);

    /// Single-mesh convenience overloads.
    GeometricEnergy geometric_energy(const Eigen::VectorXd & x, const TetMesh & mesh,
                                     const LaplacianOperator & laplacian, double w1, double w2);
    Eigen::VectorXd geometric_energy_gradient(const Eigen::VectorXd & x, const TetMesh & mesh,
                                              const LaplacianOperator & laplacian, double w1, double w2);
}
