#include "tetsplat/tet_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tetsplat/deformation.hpp"

namespace tetsplat
{
    void SurfaceMesh::validate() const
    {
        const auto n = static_cast<int>(vertices.size());
        for (std::size_t f = 0; f < faces.size(); ++f)
        {
            const Tri & t = faces[f];
            for (int v : t)
                if (v < 0 || v >= n)
                    throw std::invalid_argument("face " + std::to_string(f) + " has out-of-range vertex index");
            if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
                throw std::invalid_argument("face " + std::to_string(f) + " repeats a vertex");
        }
        if (!face_normals.empty() && face_normals.size() != faces.size())
            throw std::invalid_argument("face_normals must be empty or one per face");
    }

    std::vector<Vec3> SurfaceMesh::compute_face_normals() const
    {
        std::vector<Vec3> normals(faces.size(), Vec3::Zero());
        for (std::size_t f = 0; f < faces.size(); ++f)
        {
            const Vec3 & a = vertices[faces[f][0]];
            const Vec3 n = (vertices[faces[f][1]] - a).cross(vertices[faces[f][2]] - a);
            const double len = n.norm();
            if (len > 0.0)
                normals[f] = n / len;
        }
        return normals;
    }

    TetMesh::TetMesh(std::vector<Vec3> rest_vertices, std::vector<Tet> tets)
        : rest_(std::move(rest_vertices)), tets_(std::move(tets))
    {
        const auto n = static_cast<int>(rest_.size());
        for (std::size_t t = 0; t < tets_.size(); ++t)
        {
            const Tet & tet = tets_[t];
            for (int v : tet)
                if (v < 0 || v >= n)
                    throw std::invalid_argument("tet " + std::to_string(t) + " has out-of-range vertex index");
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j)
                    if (tet[i] == tet[j])
                        throw std::invalid_argument("tet " + std::to_string(t) + " repeats a vertex");
        }
        rest_inverse_ = rest_inverses(rest_, tets_);
        const auto volumes = signed_volumes(rest_, tets_);
        for (std::size_t t = 0; t < volumes.size(); ++t)
            if (!(volumes[t] > 0.0))
                throw std::invalid_argument("tet " + std::to_string(t) + " has non-positive rest volume");
        vertices_ = rest_;
    }

    void TetMesh::set_vertices(std::vector<Vec3> vertices)
    {
        if (vertices.size() != vertices_.size())
            throw std::invalid_argument("set_vertices: vertex count mismatch");
        vertices_ = std::move(vertices);
    }

    std::vector<double> signed_volumes(std::span<const Vec3> positions, std::span<const Tet> tets)
    {
        std::vector<double> volumes(tets.size());
        for (std::size_t t = 0; t < tets.size(); ++t)
        {
            const Vec3 & a = positions[tets[t][0]];
            const Vec3 e1 = positions[tets[t][1]] - a;
            const Vec3 e2 = positions[tets[t][2]] - a;
            const Vec3 e3 = positions[tets[t][3]] - a;
            volumes[t] = e1.dot(e2.cross(e3)) / 6.0;
        }
        return volumes;
    }

    std::vector<double> signed_volumes(const TetMesh & mesh)
    {
        return signed_volumes(mesh.vertices(), mesh.tets());
    }

    BoundaryTopology extract_boundary(std::span<const Tet> tets)
    {
        // Outward faces of a positively oriented tet (a, b, c, d), each opposite one vertex.
        struct Entry
        {
            std::array<int, 3> key;
            std::size_t order;
            Tri face;
        };
        std::vector<Entry> entries;
        entries.reserve(tets.size() * 4);
        for (std::size_t t = 0; t < tets.size(); ++t)
        {
            const auto [a, b, c, d] = tets[t];
            const Tri faces[4] = {{b, c, d}, {a, d, c}, {a, b, d}, {a, c, b}};
            for (int f = 0; f < 4; ++f)
            {
                std::array<int, 3> key = faces[f];
                std::sort(key.begin(), key.end());
                entries.push_back({key, t * 4 + f, faces[f]});
            }
        }
        std::sort(entries.begin(), entries.end(),
                  [](const Entry & l, const Entry & r) { return l.key != r.key ? l.key < r.key : l.order < r.order; });

        std::vector<std::pair<std::size_t, Tri>> unshared;
        for (std::size_t i = 0; i < entries.size();)
        {
            std::size_t j = i + 1;
            while (j < entries.size() && entries[j].key == entries[i].key)
                ++j;
            if (j - i == 1)
                unshared.emplace_back(entries[i].order, entries[i].face);
            i = j;
        }
        std::sort(unshared.begin(), unshared.end(),
                  [](const auto & l, const auto & r) { return l.first < r.first; });

        BoundaryTopology out;
        for (const auto & [order, face] : unshared)
            for (int v : face)
                out.vertex_ids.push_back(v);
        std::sort(out.vertex_ids.begin(), out.vertex_ids.end());
        out.vertex_ids.erase(std::unique(out.vertex_ids.begin(), out.vertex_ids.end()), out.vertex_ids.end());

        out.faces.reserve(unshared.size());
        for (const auto & [order, face] : unshared)
        {
            Tri local;
            for (int k = 0; k < 3; ++k)
                local[k] = static_cast<int>(
                    std::lower_bound(out.vertex_ids.begin(), out.vertex_ids.end(), face[k]) - out.vertex_ids.begin());
            out.faces.push_back(local);
        }
        return out;
    }

    namespace
    {
        Vec3 cube_to_sphere(const Vec3 & p)
        {
            const double x2 = p.x() * p.x(), y2 = p.y() * p.y(), z2 = p.z() * p.z();
            return {p.x() * std::sqrt(1.0 - y2 / 2.0 - z2 / 2.0 + y2 * z2 / 3.0),
                    p.y() * std::sqrt(1.0 - z2 / 2.0 - x2 / 2.0 + z2 * x2 / 3.0),
                    p.z() * std::sqrt(1.0 - x2 / 2.0 - y2 / 2.0 + x2 * y2 / 3.0)};
        }
    }

    TetMesh generate_unit_tetsphere(int resolution)
    {
        if (resolution < 1)
            throw std::invalid_argument("generate_unit_tetsphere: resolution must be >= 1");
        const int n = 2 * resolution;
        const int side = n + 1;
        auto index = [side](int i, int j, int k) { return (i * side + j) * side + k; };

        std::vector<Vec3> vertices;
        vertices.reserve(static_cast<std::size_t>(side) * side * side);
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j)
                for (int k = 0; k <= n; ++k)
                {
                    const Vec3 p(-1.0 + 2.0 * i / n, -1.0 + 2.0 * j / n, -1.0 + 2.0 * k / n);
                    vertices.push_back(cube_to_sphere(p));
                }

        // Each cell is split into the six monotone lattice paths from its (0,0,0)
        // corner to its (1,1,1) corner. Odd permutations come out negatively
        // oriented and get two vertices swapped.
        static constexpr std::array<std::array<int, 3>, 6> paths = {{
            {0, 1, 2}, {1, 2, 0}, {2, 0, 1}, // even
            {0, 2, 1}, {2, 1, 0}, {1, 0, 2}, // odd
        }};
        std::vector<Tet> tets;
        tets.reserve(static_cast<std::size_t>(n) * n * n * 6);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (std::size_t p = 0; p < paths.size(); ++p)
                    {
                        std::array<int, 3> c = {0, 0, 0};
                        Tet tet;
                        tet[0] = index(i, j, k);
                        for (int s = 0; s < 3; ++s)
                        {
                            ++c[paths[p][s]];
                            tet[s + 1] = index(i + c[0], j + c[1], k + c[2]);
                        }
                        if (p >= 3)
                            std::swap(tet[2], tet[3]);
                        tets.push_back(tet);
                    }
        return TetMesh(std::move(vertices), std::move(tets));
    }

    SurfaceMesh boundary_faces(const TetMesh & mesh)
    {
        const BoundaryTopology topo = extract_boundary(mesh.tets());
        SurfaceMesh surface;
        surface.faces = topo.faces;
        surface.vertices.reserve(topo.vertex_ids.size());
        for (int v : topo.vertex_ids)
            surface.vertices.push_back(mesh.vertices()[v]);
        return surface;
    }

    TetSphereSet::TetSphereSet(std::vector<TetMesh> spheres, std::vector<Vec3> centers, std::vector<double> radii)
        : spheres_(std::move(spheres)), centers_(std::move(centers)), radii_(std::move(radii))
    {
        if (spheres_.empty())
            throw std::invalid_argument("TetSphereSet needs at least one sphere");
        if (centers_.size() != spheres_.size() || radii_.size() != spheres_.size())
            throw std::invalid_argument("TetSphereSet: centers/radii must match sphere count");
        for (const auto & s : spheres_)
            if (s.tets() != spheres_.front().tets() || s.num_vertices() != spheres_.front().num_vertices())
                throw std::invalid_argument("TetSphereSet: spheres must share connectivity");
    }

    Eigen::VectorXd TetSphereSet::positions() const
    {
        const std::size_t n = vertices_per_sphere();
        Eigen::VectorXd x(3 * total_vertices());
        for (std::size_t k = 0; k < size(); ++k)
            for (std::size_t i = 0; i < n; ++i)
                x.segment<3>(3 * (k * n + i)) = spheres_[k].vertices()[i];
        return x;
    }

    Eigen::VectorXd TetSphereSet::rest_positions() const
    {
        const std::size_t n = vertices_per_sphere();
        Eigen::VectorXd x(3 * total_vertices());
        for (std::size_t k = 0; k < size(); ++k)
            for (std::size_t i = 0; i < n; ++i)
                x.segment<3>(3 * (k * n + i)) = spheres_[k].rest_vertices()[i];
        return x;
    }

    void TetSphereSet::set_positions(const Eigen::VectorXd & x)
    {
        const std::size_t n = vertices_per_sphere();
        if (static_cast<std::size_t>(x.size()) != 3 * total_vertices())
            throw std::invalid_argument("set_positions: length must be 3*N*M");
        for (std::size_t k = 0; k < size(); ++k)
        {
            std::vector<Vec3> v(n);
            for (std::size_t i = 0; i < n; ++i)
                v[i] = x.segment<3>(3 * (k * n + i));
            spheres_[k].set_vertices(std::move(v));
        }
    }

    TetSphereSet instantiate_spheres(const TetMesh & tmpl, std::span<const Vec3> centers,
                                     std::span<const double> radii)
    {
        if (centers.empty())
            throw std::invalid_argument("instantiate_spheres: need at least one center");
        if (centers.size() != radii.size())
            throw std::invalid_argument("instantiate_spheres: centers and radii differ in length");
        std::vector<TetMesh> spheres;
        spheres.reserve(centers.size());
        for (std::size_t k = 0; k < centers.size(); ++k)
        {
            if (!(radii[k] > 0.0))
                throw std::invalid_argument("instantiate_spheres: radius " + std::to_string(k) + " is not positive");
            std::vector<Vec3> rest;
            rest.reserve(tmpl.num_vertices());
            for (const Vec3 & v : tmpl.rest_vertices())
                rest.push_back(centers[k] + radii[k] * v);
            spheres.emplace_back(std::move(rest), tmpl.tets());
        }
        return TetSphereSet(std::move(spheres), {centers.begin(), centers.end()}, {radii.begin(), radii.end()});
    }

    SurfaceMesh UnionTopology::surface(const Eigen::VectorXd & flat_positions) const
    {
        SurfaceMesh s;
        s.faces = faces;
        s.vertices.reserve(vertex_ids.size());
        for (int v : vertex_ids)
            s.vertices.push_back(flat_positions.segment<3>(3 * static_cast<Eigen::Index>(v)));
        return s;
    }

    UnionTopology union_topology(const TetSphereSet & set)
    {
        const BoundaryTopology one = extract_boundary(set.tets());
        const std::size_t n = set.vertices_per_sphere();
        const auto nb = static_cast<int>(one.vertex_ids.size());

        UnionTopology u;
        u.faces_per_sphere = one.faces.size();
        u.vertices_per_sphere = one.vertex_ids.size();
        u.faces.reserve(one.faces.size() * set.size());
        u.vertex_ids.reserve(one.vertex_ids.size() * set.size());
        for (std::size_t k = 0; k < set.size(); ++k)
        {
            const int base = static_cast<int>(k) * nb;
            for (const Tri & f : one.faces)
                u.faces.push_back({f[0] + base, f[1] + base, f[2] + base});
            for (int v : one.vertex_ids)
                u.vertex_ids.push_back(static_cast<int>(k * n) + v);
        }
        return u;
    }

    SurfaceMesh union_surfaces(const TetSphereSet & set)
    {
        return union_topology(set).surface(set.positions());
    }

    Eigen::VectorXd flatten(std::span<const Vec3> points)
    {
        Eigen::VectorXd x(3 * points.size());
        for (std::size_t i = 0; i < points.size(); ++i)
            x.segment<3>(3 * i) = points[i];
        return x;
    }

    std::vector<Vec3> unflatten(const Eigen::VectorXd & x)
    {
        std::vector<Vec3> points(static_cast<std::size_t>(x.size() / 3));
        for (std::size_t i = 0; i < points.size(); ++i)
            points[i] = x.segment<3>(3 * i);
        return points;
    }
}
