#include "tetsplat/deformation.hpp"

#include <algorithm>
#include <cmath>

namespace tetsplat
{
    namespace
    {
        using RowMajorMat3 = Eigen::Matrix<double, 3, 3, Eigen::RowMajor>;

        Mat3 edge_matrix(const Vec3 & x0, const Vec3 & x1, const Vec3 & x2, const Vec3 & x3)
        {
            Mat3 d;
            d.col(0) = x1 - x0;
            d.col(1) = x2 - x0;
            d.col(2) = x3 - x0;
            return d;
        }

        Mat3 rest_edge_matrix(const TetMesh & mesh, const Tet & tet)
        {
            const auto & r = mesh.rest_vertices();
            return edge_matrix(r[tet[0]], r[tet[1]], r[tet[2]], r[tet[3]]);
        }

        // Ds Dm^-1 written as I + (Ds - Dm) Dm^-1: algebraically equal, but exact
        // at rest so the undeformed state has no rounding residue in L F.
        Mat3 gradient_from(const Mat3 & ds, const Mat3 & dm, const Mat3 & dm_inv)
        {
            return Mat3::Identity() + (ds - dm) * dm_inv;
        }

        // Shared kernel over M blocks of one connectivity. mesh_of(k) yields the
        // TetMesh holding the rest state of block k.
        template <typename MeshOf>
        GeometricEnergy energy_kernel(const Eigen::VectorXd & x, std::span<const Tet> tets, std::size_t verts_per_block,
                                      std::size_t blocks, MeshOf && mesh_of,
                                      const LaplacianOperator & laplacian, double w1, double w2)
        {
            const std::size_t T = tets.size();
            if (static_cast<std::size_t>(x.size()) != 3 * verts_per_block * blocks)
                throw std::invalid_argument("geometric_energy: position vector has wrong length");
            if (laplacian.tets_per_block() != T || laplacian.blocks() != blocks)
                throw std::invalid_argument("geometric_energy: Laplacian does not match the mesh");

            DeformationGradientField field(T * blocks);
            std::vector<double> dets(T * blocks);
            for (std::size_t k = 0; k < blocks; ++k)
            {
                const TetMesh & mesh = mesh_of(k);
                const std::vector<Mat3> & dm_inv = mesh.rest_inverse();
                const Eigen::Index base = static_cast<Eigen::Index>(3 * k * verts_per_block);
                for (std::size_t t = 0; t < T; ++t)
                {
                    const Tet & tet = tets[t];
                    const Mat3 ds = edge_matrix(x.segment<3>(base + 3 * tet[0]), x.segment<3>(base + 3 * tet[1]),
                                                x.segment<3>(base + 3 * tet[2]), x.segment<3>(base + 3 * tet[3]));
                    const Mat3 f = gradient_from(ds, rest_edge_matrix(mesh, tet), dm_inv[t]);
                    field.set(k * T + t, f);
                    dets[k * T + t] = f.determinant();
                }
            }

            GeometricEnergy out;
            const Eigen::VectorXd lf = laplacian.apply(field.flat());
            out.biharmonic = lf.squaredNorm();
            // dE/dF for the whole field: 2 w1 L^T L F (L symmetric).
            Eigen::VectorXd dfield = (2.0 * w1) * laplacian.apply(lf);
            for (std::size_t i = 0; i < dets.size(); ++i)
            {
                if (dets[i] <= 0.0)
                    ++out.inverted;
                if (dets[i] < 0.0)
                {
                    out.penalty += dets[i] * dets[i];
                    const Mat3 g = (2.0 * w2 * dets[i]) * cofactor(field[i]);
                    Eigen::Map<RowMajorMat3>(dfield.data() + 9 * i) += g;
                }
            }

            out.gradient = Eigen::VectorXd::Zero(x.size());
            for (std::size_t k = 0; k < blocks; ++k)
            {
                const std::vector<Mat3> & dm_inv = mesh_of(k).rest_inverse();
                const Eigen::Index base = static_cast<Eigen::Index>(3 * k * verts_per_block);
                for (std::size_t t = 0; t < T; ++t)
                {
                    const Mat3 g = Eigen::Map<const RowMajorMat3>(dfield.data() + 9 * (k * T + t));
                    // F = Ds Dm^-1  =>  dE/dDs = dE/dF Dm^-T; column c of Ds is x_{c+1} - x_0.
                    const Mat3 dds = g * dm_inv[t].transpose();
                    const Tet & tet = tets[t];
                    for (int c = 0; c < 3; ++c)
                        out.gradient.segment<3>(base + 3 * tet[c + 1]) += dds.col(c);
                    out.gradient.segment<3>(base + 3 * tet[0]) -= dds.rowwise().sum();
                }
            }
            return out;
        }
    }

    std::vector<Mat3> rest_inverses(std::span<const Vec3> rest, std::span<const Tet> tets)
    {
        std::vector<Mat3> out(tets.size());
        for (std::size_t t = 0; t < tets.size(); ++t)
        {
            const Tet & tet = tets[t];
            const Mat3 dm = edge_matrix(rest[tet[0]], rest[tet[1]], rest[tet[2]], rest[tet[3]]);
            double scale = 0.0;
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j)
                    scale = std::max(scale, (rest[tet[i]] - rest[tet[j]]).norm());
            const double det = dm.determinant();
            if (!(std::abs(det) > 1e-12 * scale * scale * scale))
                throw DegenerateTetError(t, "degenerate rest tetrahedron " + std::to_string(t));
            out[t] = dm.inverse();
        }
        return out;
    }

    DeformationGradientField::DeformationGradientField(std::span<const Mat3> gradients)
        : values_(9 * gradients.size())
    {
        for (std::size_t t = 0; t < gradients.size(); ++t)
            set(t, gradients[t]);
    }

    Mat3 DeformationGradientField::operator[](std::size_t t) const
    {
        return Eigen::Map<const RowMajorMat3>(values_.data() + 9 * t);
    }

    void DeformationGradientField::set(std::size_t t, const Mat3 & f)
    {
        Eigen::Map<RowMajorMat3>(values_.data() + 9 * t) = f;
    }

    DeformationGradientField deformation_gradients(std::span<const Vec3> x, const TetMesh & mesh)
    {
        if (x.size() != mesh.num_vertices())
            throw std::invalid_argument("deformation_gradients: position count mismatch");
        DeformationGradientField field(mesh.num_tets());
        for (std::size_t t = 0; t < mesh.num_tets(); ++t)
        {
            const Tet & tet = mesh.tets()[t];
            field.set(t, gradient_from(edge_matrix(x[tet[0]], x[tet[1]], x[tet[2]], x[tet[3]]),
                                       rest_edge_matrix(mesh, tet), mesh.rest_inverse()[t]));
        }
        return field;
    }

    DeformationGradientField deformation_gradients(const Eigen::VectorXd & x, const TetSphereSet & set)
    {
        const std::size_t n = set.vertices_per_sphere();
        const std::size_t T = set.tets_per_sphere();
        if (static_cast<std::size_t>(x.size()) != 3 * set.total_vertices())
            throw std::invalid_argument("deformation_gradients: position vector has wrong length");
        DeformationGradientField field(set.total_tets());
        for (std::size_t k = 0; k < set.size(); ++k)
        {
            const TetMesh & mesh = set.sphere(k);
            const Eigen::Index base = static_cast<Eigen::Index>(3 * k * n);
            for (std::size_t t = 0; t < T; ++t)
            {
                const Tet & tet = set.tets()[t];
                field.set(k * T + t,
                          gradient_from(edge_matrix(x.segment<3>(base + 3 * tet[0]), x.segment<3>(base + 3 * tet[1]),
                                                    x.segment<3>(base + 3 * tet[2]), x.segment<3>(base + 3 * tet[3])),
                                        rest_edge_matrix(mesh, tet), mesh.rest_inverse()[t]));
            }
        }
        return field;
    }

    LaplacianOperator::LaplacianOperator(std::span<const Tet> tets, std::size_t blocks) : blocks_(blocks)
    {
        // Pair up tets through their sorted face keys; a face seen twice is shared.
        std::vector<std::pair<std::array<int, 3>, int>> faces;
        faces.reserve(tets.size() * 4);
        for (std::size_t t = 0; t < tets.size(); ++t)
            for (int skip = 0; skip < 4; ++skip)
            {
                std::array<int, 3> key;
                for (int i = 0, j = 0; i < 4; ++i)
                    if (i != skip)
                        key[j++] = tets[t][i];
                std::sort(key.begin(), key.end());
                faces.emplace_back(key, static_cast<int>(t));
            }
        std::sort(faces.begin(), faces.end());

        std::vector<std::vector<int>> nbrs(tets.size());
        for (std::size_t i = 0; i + 1 < faces.size();)
        {
            std::size_t j = i + 1;
            while (j < faces.size() && faces[j].first == faces[i].first)
                ++j;
            if (j - i > 2)
                throw std::invalid_argument("build_laplacian: a triangle is shared by more than two tets");
            if (j - i == 2)
            {
                nbrs[faces[i].second].push_back(faces[i + 1].second);
                nbrs[faces[i + 1].second].push_back(faces[i].second);
            }
            i = j;
        }

        offsets_.assign(1, 0);
        degree_.resize(tets.size());
        for (std::size_t t = 0; t < tets.size(); ++t)
        {
            std::sort(nbrs[t].begin(), nbrs[t].end());
            adjacency_.insert(adjacency_.end(), nbrs[t].begin(), nbrs[t].end());
            offsets_.push_back(static_cast<int>(adjacency_.size()));
            degree_[t] = static_cast<int>(nbrs[t].size());
        }
    }

    std::span<const int> LaplacianOperator::neighbors(std::size_t local_tet) const
    {
        return {adjacency_.data() + offsets_[local_tet],
                static_cast<std::size_t>(offsets_[local_tet + 1] - offsets_[local_tet])};
    }

    Eigen::VectorXd LaplacianOperator::apply(const Eigen::VectorXd & field) const
    {
        if (static_cast<std::size_t>(field.size()) != 9 * size())
            throw std::invalid_argument("LaplacianOperator::apply: field size mismatch");
        const std::size_t T = tets_per_block();
        Eigen::VectorXd out(field.size());
        using Vec9 = Eigen::Matrix<double, 9, 1>;
        for (std::size_t k = 0; k < blocks_; ++k)
            for (std::size_t p = 0; p < T; ++p)
            {
                const std::size_t row = k * T + p;
                Vec9 acc = degree_[p] * field.segment<9>(9 * row);
                for (int q : neighbors(p))
                    acc -= field.segment<9>(9 * (k * T + q));
                out.segment<9>(9 * row) = acc;
            }
        return out;
    }

    Eigen::SparseMatrix<double> LaplacianOperator::scalar_matrix() const
    {
        const std::size_t T = tets_per_block();
        std::vector<Eigen::Triplet<double>> triplets;
        for (std::size_t k = 0; k < blocks_; ++k)
            for (std::size_t p = 0; p < T; ++p)
            {
                const auto row = static_cast<int>(k * T + p);
                triplets.emplace_back(row, row, degree_[p]);
                for (int q : neighbors(p))
                    triplets.emplace_back(row, static_cast<int>(k * T) + q, -1.0);
            }
        Eigen::SparseMatrix<double> l(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(size()));
        l.setFromTriplets(triplets.begin(), triplets.end());
        return l;
    }

    LaplacianOperator build_laplacian(std::span<const Tet> tets)
    {
        return LaplacianOperator(tets, 1);
    }

    LaplacianOperator build_laplacian(const TetSphereSet & set)
    {
        return LaplacianOperator(set.tets(), set.size());
    }

    double biharmonic_energy(const DeformationGradientField & field, const LaplacianOperator & laplacian)
    {
        return laplacian.apply(field.flat()).squaredNorm();
    }

    double inversion_penalty(const DeformationGradientField & field)
    {
        double sum = 0.0;
        for (std::size_t t = 0; t < field.num_tets(); ++t)
        {
            const double d = std::min(0.0, field[t].determinant());
            sum += d * d;
        }
        return sum;
    }

    std::size_t count_inverted(const DeformationGradientField & field)
    {
        std::size_t count = 0;
        for (std::size_t t = 0; t < field.num_tets(); ++t)
            if (field[t].determinant() <= 0.0)
                ++count;
        return count;
    }

    Mat3 cofactor(const Mat3 & f)
    {
        Mat3 c;
        c.col(0) = f.col(1).cross(f.col(2));
        c.col(1) = f.col(2).cross(f.col(0));
        c.col(2) = f.col(0).cross(f.col(1));
        return c;
    }

    GeometricEnergy geometric_energy(const Eigen::VectorXd & x, const TetSphereSet & set,
                                     const LaplacianOperator & laplacian, double w1, double w2)
    {
        return energy_kernel(
            x, set.tets(), set.vertices_per_sphere(), set.size(),
            [&set](std::size_t k) -> const TetMesh & { return set.sphere(k); }, laplacian,
            w1, w2);
    }

    Eigen::VectorXd geometric_energy_gradient(const Eigen::VectorXd & x, const TetSphereSet & set,
                                              const LaplacianOperator & laplacian, double w1, double w2)
    {
        return geometric_energy(x, set, laplacian, w1, w2).gradient;
    }

    GeometricEnergy geometric_energy(const Eigen::VectorXd & x, const TetMesh & mesh,
                                     const LaplacianOperator & laplacian, double w1, double w2)
    {
        return energy_kernel(
            x, mesh.tets(), mesh.num_vertices(), 1,
            [&mesh](std::size_t) -> const TetMesh & { return mesh; }, laplacian, w1, w2);
    }

    Eigen::VectorXd geometric_energy_gradient(const Eigen::VectorXd & x, const TetMesh & mesh,
                                              const LaplacianOperator & laplacian, double w1, double w2)
    {
        return geometric_energy(x, mesh, laplacian, w1, w2).gradient;
    }
}
