#include "tetsplat/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/Geometry>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <json.hpp>

namespace tetsplat
{
    KdTree::KdTree(std::span<const Vec3> points) : points_(points.begin(), points.end()), order_(points.size())
    {
        std::iota(order_.begin(), order_.end(), 0);
        if (!points_.empty())
            build(0, static_cast<int>(points_.size()));
    }

    int KdTree::build(int begin, int end)
    {
        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back({begin, end, -1, -1, 0, 0.0});
        if (end - begin <= 8)
            return id;
        Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity()), hi = -lo;
        for (int i = begin; i < end; ++i)
        {
            lo = lo.cwiseMin(points_[order_[i]]);
            hi = hi.cwiseMax(points_[order_[i]]);
        }
        int axis;
        (hi - lo).maxCoeff(&axis);
        const int mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                         [&](int a, int b) { return points_[a][axis] < points_[b][axis]; });
        // Children reorder their ranges, so read the split value first.
        nodes_[id].axis = axis;
        nodes_[id].split = points_[order_[mid]][axis];
        const int left = build(begin, mid);
        const int right = build(mid, end);
        nodes_[id].left = left;
        nodes_[id].right = right;
        return id;
    }

    std::pair<int, double> KdTree::nearest(const Vec3 & q) const
    {
        if (points_.empty())
            throw std::invalid_argument("KdTree::nearest on an empty tree");
        int best = -1;
        double best_d2 = std::numeric_limits<double>::infinity();
        // (node, squared distance from q to the node's half-space)
        std::vector<std::pair<int, double>> stack{{0, 0.0}};
        while (!stack.empty())
        {
            const auto [id, bound] = stack.back();
            stack.pop_back();
            if (bound > best_d2)
                continue;
            const Node & n = nodes_[id];
            if (n.left < 0)
            {
                for (int i = n.begin; i < n.end; ++i)
                {
                    const int p = order_[i];
                    const double d2 = (points_[p] - q).squaredNorm();
                    if (d2 < best_d2 || (d2 == best_d2 && p < best))
                    {
                        best = p;
                        best_d2 = d2;
                    }
                }
                continue;
            }
            const double diff = q[n.axis] - n.split;
            const int near = diff < 0.0 ? n.left : n.right;
            const int far = diff < 0.0 ? n.right : n.left;
            stack.push_back({far, diff * diff});
            stack.push_back({near, 0.0});
        }
        return {best, best_d2};
    }

    double area_length_ratio(const SurfaceMesh & surface)
    {
        if (surface.faces.empty())
            throw std::invalid_argument("area_length_ratio: empty surface");
        double sum = 0.0;
        for (const Tri & f : surface.faces)
        {
            const Vec3 & a = surface.vertices[f[0]];
            const Vec3 & b = surface.vertices[f[1]];
            const Vec3 & c = surface.vertices[f[2]];
            const double area = 0.5 * (b - a).cross(c - a).norm();
            const double e0 = (b - a).norm(), e1 = (c - b).norm(), e2 = (a - c).norm();
            const double half_perimeter = 0.5 * (e0 + e1 + e2);
            const double longest = std::max({e0, e1, e2});
            if (area > 0.0 && longest > 0.0)
                sum += 6.0 / std::sqrt(3.0) * area / (half_perimeter * longest);
        }
        return sum / static_cast<double>(surface.faces.size());
    }

    namespace
    {
        struct EdgeKey
        {
            int a, b, face;
            bool operator<(const EdgeKey & o) const { return std::tie(a, b, face) < std::tie(o.a, o.b, o.face); }
            bool same_edge(const EdgeKey & o) const { return a == o.a && b == o.b; }
        };

        std::vector<EdgeKey> sorted_edges(const SurfaceMesh & surface)
        {
            std::vector<EdgeKey> edges;
            edges.reserve(3 * surface.faces.size());
            for (std::size_t f = 0; f < surface.faces.size(); ++f)
                for (int e = 0; e < 3; ++e)
                {
                    const int u = surface.faces[f][e], v = surface.faces[f][(e + 1) % 3];
                    edges.push_back({std::min(u, v), std::max(u, v), static_cast<int>(f)});
                }
            std::sort(edges.begin(), edges.end());
            return edges;
        }

        int find_root(std::vector<int> & parent, int x)
        {
            while (parent[x] != x)
            {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            return x;
        }
    }

    bool manifoldness_check(const SurfaceMesh & surface)
    {
        if (surface.faces.empty())
            return false;
        const auto edges = sorted_edges(surface);
        for (std::size_t i = 0; i < edges.size();)
        {
            std::size_t j = i;
            while (j < edges.size() && edges[j].same_edge(edges[i]))
                ++j;
            if (j - i != 2)
                return false;
            i = j;
        }

        // The link of every vertex must be one cycle: each link vertex has degree
        // two and walking the link from any edge returns after visiting all of them.
        const std::size_t nv = surface.vertices.size();
        std::vector<std::vector<std::pair<int, int>>> link(nv);
        for (const Tri & f : surface.faces)
            for (int k = 0; k < 3; ++k)
                link[f[k]].push_back({f[(k + 1) % 3], f[(k + 2) % 3]});
        for (std::size_t v = 0; v < nv; ++v)
        {
            const auto & l = link[v];
            if (l.empty())
                return false;
            std::vector<int> ends;
            for (const auto & [b, c] : l)
            {
                ends.push_back(b);
                ends.push_back(c);
            }
            std::sort(ends.begin(), ends.end());
            for (std::size_t i = 0; i < ends.size(); i += 2)
                if (ends[i] != ends[i + 1] || (i + 2 < ends.size() && ends[i + 2] == ends[i]))
                    return false;
            std::vector<char> used(l.size(), 0);
            used[0] = 1;
            int current = l[0].second;
            std::size_t visited = 1;
            while (current != l[0].first)
            {
                std::size_t next = l.size();
                for (std::size_t e = 0; e < l.size() && next == l.size(); ++e)
                    if (!used[e] && (l[e].first == current || l[e].second == current))
                        next = e;
                if (next == l.size())
                    return false;
                used[next] = 1;
                ++visited;
                current = l[next].first == current ? l[next].second : l[next].first;
            }
            if (visited != l.size())
                return false;
        }
        return true;
    }

    std::size_t connected_components(const SurfaceMesh & surface, std::vector<int> * labels)
    {
        const std::size_t nf = surface.faces.size();
        std::vector<int> parent(nf);
        std::iota(parent.begin(), parent.end(), 0);
        const auto edges = sorted_edges(surface);
        for (std::size_t i = 1; i < edges.size(); ++i)
            if (edges[i].same_edge(edges[i - 1]))
            {
                const int ra = find_root(parent, edges[i].face), rb = find_root(parent, edges[i - 1].face);
                if (ra != rb)
                    parent[std::max(ra, rb)] = std::min(ra, rb);
            }
        std::vector<int> id(nf, -1);
        int count = 0;
        for (std::size_t f = 0; f < nf; ++f)
        {
            const int r = find_root(parent, static_cast<int>(f));
            if (id[r] < 0)
                id[r] = count++;
            id[f] = id[r];
        }
        if (labels)
            *labels = std::move(id);
        return static_cast<std::size_t>(count);
    }

    std::size_t cc_diff(const SurfaceMesh & recon, const SurfaceMesh & gt)
    {
        const std::size_t a = connected_components(recon), b = connected_components(gt);
        return a > b ? a - b : b - a;
    }

    SurfaceSamples sample_surface_points(const SurfaceMesh & surface, std::size_t count, std::uint64_t seed)
    {
        const std::vector<Vec3> normals = surface.compute_face_normals();
        std::vector<double> cumulative(surface.faces.size());
        double total = 0.0;
        for (std::size_t f = 0; f < surface.faces.size(); ++f)
        {
            const auto [a, b, c] = surface.faces[f];
            total += 0.5 * (surface.vertices[b] - surface.vertices[a]).cross(surface.vertices[c] - surface.vertices[a]).norm();
            cumulative[f] = total;
        }
        if (!(total > 0.0))
            throw std::invalid_argument("sample_surface_points: surface has zero area");

        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        SurfaceSamples out;
        out.points.reserve(count);
        out.normals.reserve(count);
        for (std::size_t s = 0; s < count; ++s)
        {
            const double pick = uniform(rng) * total;
            const std::size_t f = std::min<std::size_t>(
                std::upper_bound(cumulative.begin(), cumulative.end(), pick) - cumulative.begin(), cumulative.size() - 1);
            const double r1 = std::sqrt(uniform(rng)), r2 = uniform(rng);
            const auto [a, b, c] = surface.faces[f];
            out.points.push_back((1.0 - r1) * surface.vertices[a] + r1 * (1.0 - r2) * surface.vertices[b] +
                                 r1 * r2 * surface.vertices[c]);
            out.normals.push_back(normals[f]);
        }
        return out;
    }

    std::vector<double> nearest_distances(std::span<const Vec3> a, std::span<const Vec3> b)
    {
        const KdTree tree(b);
        std::vector<double> d(a.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            d[i] = std::sqrt(tree.nearest(a[i]).second);
        return d;
    }

    double chamfer(std::span<const Vec3> a, std::span<const Vec3> b)
    {
        if (a.empty() || b.empty())
            throw std::invalid_argument("chamfer: empty point set");
        const auto ab = nearest_distances(a, b);
        const auto ba = nearest_distances(b, a);
        const double mean_ab = std::accumulate(ab.begin(), ab.end(), 0.0) / static_cast<double>(ab.size());
        const double mean_ba = std::accumulate(ba.begin(), ba.end(), 0.0) / static_cast<double>(ba.size());
        return 0.5 * (mean_ab + mean_ba);
    }

    double f_score(std::span<const Vec3> a, std::span<const Vec3> b, double tau)
    {
        if (a.empty() || b.empty())
            throw std::invalid_argument("f_score: empty point set");
        if (!(tau > 0.0))
            throw std::invalid_argument("f_score: tau must be positive");
        auto share = [tau](const std::vector<double> & d) {
            return static_cast<double>(std::count_if(d.begin(), d.end(), [tau](double x) { return x < tau; })) /
                   static_cast<double>(d.size());
        };
        const double precision = share(nearest_distances(a, b));
        const double recall = share(nearest_distances(b, a));
        return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    }

    namespace
    {
        double directed_normal_agreement(const SurfaceSamples & a, const SurfaceSamples & b)
        {
            const KdTree tree(b.points);
            double sum = 0.0;
            for (std::size_t i = 0; i < a.points.size(); ++i)
                sum += std::abs(a.normals[i].dot(b.normals[tree.nearest(a.points[i]).first]));
            return sum / static_cast<double>(a.points.size());
        }

        double normal_consistency(const SurfaceSamples & a, const SurfaceSamples & b)
        {
            return 0.5 * (directed_normal_agreement(a, b) + directed_normal_agreement(b, a));
        }

        Box bounding_box(std::initializer_list<const SurfaceMesh *> meshes)
        {
            Box box{Vec3::Constant(std::numeric_limits<double>::infinity()),
                    Vec3::Constant(-std::numeric_limits<double>::infinity())};
            for (const SurfaceMesh * m : meshes)
                for (const Vec3 & v : m->vertices)
                {
                    box.min = box.min.cwiseMin(v);
                    box.max = box.max.cwiseMax(v);
                }
            return box;
        }

        inline bool owns_edge_2d(double da, double db) { return db > 0.0 || (db == 0.0 && da < 0.0); }
    }

    double normal_consistency(const SurfaceMesh & a, const SurfaceMesh & b, std::size_t samples, std::uint64_t seed)
    {
        return normal_consistency(sample_surface_points(a, samples, seed), sample_surface_points(b, samples, seed + 1));
    }

    std::vector<std::uint8_t> occupancy(const SurfaceMesh & surface, const Box & box, int resolution)
    {
        if (resolution < 1)
            throw std::invalid_argument("occupancy: resolution must be positive");
        const int n = resolution;
        const Vec3 cell = (box.max - box.min) / n;
        auto center = [&](int axis, int i) { return box.min[axis] + (i + 0.5) * cell[axis]; };
        std::vector<std::uint8_t> inside(static_cast<std::size_t>(n) * n * n, 0);
        if (surface.faces.empty())
            return inside;

        std::vector<int> labels;
        const std::size_t components = connected_components(surface, &labels);
        std::vector<std::vector<int>> faces_of(components);
        for (std::size_t f = 0; f < labels.size(); ++f)
            faces_of[labels[f]].push_back(static_cast<int>(f));

        std::vector<std::vector<double>> hits(static_cast<std::size_t>(n) * n);
        for (const auto & faces : faces_of)
        {
            for (auto & h : hits)
                h.clear();
            for (int f : faces)
            {
                const Tri & tri = surface.faces[f];
                // Triangle in the (y, z) plane, oriented counter-clockwise.
                Vec2 p[3];
                double xs[3];
                for (int k = 0; k < 3; ++k)
                {
                    const Vec3 & v = surface.vertices[tri[k]];
                    p[k] = {v.y(), v.z()};
                    xs[k] = v.x();
                }
                double area2 = (p[1] - p[0]).x() * (p[2] - p[0]).y() - (p[1] - p[0]).y() * (p[2] - p[0]).x();
                if (area2 == 0.0)
                    continue;
                if (area2 < 0.0)
                {
                    std::swap(p[1], p[2]);
                    std::swap(xs[1], xs[2]);
                    area2 = -area2;
                }
                const double ymin = std::min({p[0].x(), p[1].x(), p[2].x()});
                const double ymax = std::max({p[0].x(), p[1].x(), p[2].x()});
                const double zmin = std::min({p[0].y(), p[1].y(), p[2].y()});
                const double zmax = std::max({p[0].y(), p[1].y(), p[2].y()});
                const int j0 = std::max(0, static_cast<int>(std::ceil((ymin - box.min.y()) / cell.y() - 0.5)));
                const int j1 = std::min(n - 1, static_cast<int>(std::floor((ymax - box.min.y()) / cell.y() - 0.5)));
                const int k0 = std::max(0, static_cast<int>(std::ceil((zmin - box.min.z()) / cell.z() - 0.5)));
                const int k1 = std::min(n - 1, static_cast<int>(std::floor((zmax - box.min.z()) / cell.z() - 0.5)));
                for (int k = k0; k <= k1; ++k)
                    for (int j = j0; j <= j1; ++j)
                    {
                        const Vec2 q(center(1, j), center(2, k));
                        double w[3];
                        bool in = true;
                        for (int e = 0; e < 3 && in; ++e)
                        {
                            const Vec2 & from = p[(e + 1) % 3];
                            const Vec2 & to = p[(e + 2) % 3];
                            const Vec2 d = to - from;
                            w[e] = d.x() * (q - from).y() - d.y() * (q - from).x();
                            in = w[e] > 0.0 || (w[e] == 0.0 && owns_edge_2d(d.x(), d.y()));
                        }
                        if (in)
                            hits[static_cast<std::size_t>(k) * n + j].push_back(
                                (w[0] * xs[0] + w[1] * xs[1] + w[2] * xs[2]) / area2);
                    }
            }
            for (int k = 0; k < n; ++k)
                for (int j = 0; j < n; ++j)
                {
                    auto & h = hits[static_cast<std::size_t>(k) * n + j];
                    if (h.empty())
                        continue;
                    std::sort(h.begin(), h.end());
                    std::size_t crossed = 0;
                    for (int i = 0; i < n; ++i)
                    {
                        const double x = center(0, i);
                        while (crossed < h.size() && h[crossed] < x)
                            ++crossed;
                        if (crossed % 2 == 1)
                            inside[(static_cast<std::size_t>(k) * n + j) * n + i] = 1;
                    }
                }
        }
        return inside;
    }

    IouResult volume_iou(const SurfaceMesh & a, const SurfaceMesh & b, int resolution)
    {
        IouResult result;
        if (!manifoldness_check(a) || !manifoldness_check(b))
            result.warning = "mesh is not a closed manifold; occupancy uses per-component parity";
        Box box = bounding_box({&a, &b});
        if (!(box.max.array() >= box.min.array()).all())
        {
            result.warning = "both occupancies are empty";
            return result;
        }
        const Vec3 pad = 0.01 * (box.max - box.min).cwiseMax(Vec3::Constant(1e-9));
        box.min -= pad;
        box.max += pad;
        const auto oa = occupancy(a, box, resolution);
        const auto ob = occupancy(b, box, resolution);
        std::size_t inter = 0, uni = 0;
        for (std::size_t i = 0; i < oa.size(); ++i)
        {
            inter += (oa[i] && ob[i]) ? 1 : 0;
            uni += (oa[i] || ob[i]) ? 1 : 0;
        }
        if (uni == 0)
        {
            result.warning = "both occupancies are empty";
            return result;
        }
        result.iou = static_cast<double>(inter) / static_cast<double>(uni);
        return result;
    }

    std::vector<Vec3> sharp_edge_points(const SurfaceMesh & surface, double threshold_degrees, std::size_t count)
    {
        const std::vector<Vec3> normals = surface.compute_face_normals();
        const double cos_threshold = std::cos(threshold_degrees * M_PI / 180.0);
        const auto edges = sorted_edges(surface);
        std::vector<std::pair<int, int>> sharp;
        double total = 0.0;
        for (std::size_t i = 0; i < edges.size();)
        {
            std::size_t j = i;
            while (j < edges.size() && edges[j].same_edge(edges[i]))
                ++j;
            if (j - i == 2)
            {
                const Vec3 & n0 = normals[edges[i].face];
                const Vec3 & n1 = normals[edges[i + 1].face];
                if (n0 != Vec3::Zero() && n1 != Vec3::Zero() && n0.dot(n1) < cos_threshold)
                {
                    sharp.push_back({edges[i].a, edges[i].b});
                    total += (surface.vertices[edges[i].b] - surface.vertices[edges[i].a]).norm();
                }
            }
            i = j;
        }
        std::vector<Vec3> points;
        if (sharp.empty() || !(total > 0.0))
            return points;
        for (const auto & [u, v] : sharp)
        {
            const Vec3 & a = surface.vertices[u];
            const Vec3 & b = surface.vertices[v];
            const double share = static_cast<double>(count) * (b - a).norm() / total;
            const int k_count = std::max(1, static_cast<int>(std::lround(share)));
            for (int k = 0; k < k_count; ++k)
                points.push_back(a + (k + 0.5) / k_count * (b - a));
        }
        return points;
    }

    std::optional<double> edge_chamfer(const SurfaceMesh & a, const SurfaceMesh & b, double threshold_degrees,
                                       std::size_t count)
    {
        const auto pa = sharp_edge_points(a, threshold_degrees, count);
        const auto pb = sharp_edge_points(b, threshold_degrees, count);
        if (pa.empty() || pb.empty())
            return std::nullopt;
        return chamfer(pa, pb);
    }

    std::optional<double> edge_f_score(const SurfaceMesh & a, const SurfaceMesh & b, double threshold_degrees,
                                       double tau, std::size_t count)
    {
        const auto pa = sharp_edge_points(a, threshold_degrees, count);
        const auto pb = sharp_edge_points(b, threshold_degrees, count);
        if (pa.empty() || pb.empty())
            return std::nullopt;
        return f_score(pa, pb, tau);
    }

    namespace
    {
        Vec3 centroid(std::span<const Vec3> p)
        {
            Vec3 c = Vec3::Zero();
            for (const Vec3 & x : p)
                c += x;
            return c / static_cast<double>(p.size());
        }

        // Least-squares rotation and translation taking src[i] to dst[i].
        RigidTransform procrustes(std::span<const Vec3> src, std::span<const Vec3> dst)
        {
            const Vec3 cs = centroid(src), cd = centroid(dst);
            Mat3 h = Mat3::Zero();
            for (std::size_t i = 0; i < src.size(); ++i)
                h += (src[i] - cs) * (dst[i] - cd).transpose();
            Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
            Mat3 d = Mat3::Identity();
            d(2, 2) = (svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
            RigidTransform t;
            t.rotation = svd.matrixV() * d * svd.matrixU().transpose();
            t.translation = cd - t.rotation * cs;
            return t;
        }
    }

    IcpResult icp_align(std::span<const Vec3> source, std::span<const Vec3> target, int max_iters, double tol)
    {
        if (source.size() < 3 || target.size() < 3)
            throw std::invalid_argument("icp_align: need at least 3 points on each side");
        IcpResult result;
        const Vec3 cs = centroid(source);
        Mat3 cov = Mat3::Zero();
        for (const Vec3 & p : source)
            cov += (p - cs) * (p - cs).transpose();
        Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
        if (eig.eigenvalues()(1) <= 1e-12 * std::max(eig.eigenvalues()(2), 1e-300))
        {
            result.warning = "degenerate source covariance; returning identity";
            return result;
        }

        result.transform.translation = centroid(target) - cs;
        const KdTree tree(target);
        std::vector<Vec3> matched(source.size());
        double previous = std::numeric_limits<double>::infinity();
        for (int it = 1; it <= max_iters; ++it)
        {
            for (std::size_t i = 0; i < source.size(); ++i)
                matched[i] = target[tree.nearest(result.transform.apply(source[i])).first];
            result.transform = procrustes(source, matched);
            double sq = 0.0;
            for (std::size_t i = 0; i < source.size(); ++i)
                sq += (result.transform.apply(source[i]) - matched[i]).squaredNorm();
            result.rmse = std::sqrt(sq / static_cast<double>(source.size()));
            result.iterations = it;
            if (std::isfinite(previous) && std::abs(previous - result.rmse) <= tol * previous)
                break;
            previous = result.rmse;
        }
        return result;
    }

    SurfaceMesh transformed(const SurfaceMesh & surface, const RigidTransform & t)
    {
        SurfaceMesh out = surface;
        for (Vec3 & v : out.vertices)
            v = t.apply(v);
        out.face_normals.clear();
        return out;
    }

    std::string MetricReport::to_json() const
    {
        nlohmann::json j;
        j["chamfer"] = chamfer;
        j["vol_iou"] = vol_iou;
        j["alr"] = alr;
        j["manifold"] = manifold;
        j["cc_count"] = cc_count;
        j["cc_diff"] = cc_diff;
        j["f_score"] = f_score;
        j["normal_consistency"] = normal_consistency;
        j["edge_chamfer"] = edge_chamfer ? nlohmann::json(*edge_chamfer) : nlohmann::json("no-sharp-edges");
        j["edge_f_score"] = edge_f_score ? nlohmann::json(*edge_f_score) : nlohmann::json("no-sharp-edges");
        j["tau"] = tau;
        j["warnings"] = warnings;
        return j.dump(2);
    }

    MetricReport evaluate(const SurfaceMesh & recon_in, const SurfaceMesh & gt, const MetricOptions & options)
    {
        MetricReport report;
        SurfaceMesh recon = recon_in;
        const SurfaceSamples gt_samples = sample_surface_points(gt, options.samples, options.seed);
        if (options.icp)
        {
            const SurfaceSamples rs = sample_surface_points(recon, options.samples, options.seed + 1);
            const IcpResult icp = icp_align(rs.points, gt_samples.points);
            if (!icp.warning.empty())
                report.warnings.push_back("icp: " + icp.warning);
            recon = transformed(recon, icp.transform);
        }
        const SurfaceSamples recon_samples = sample_surface_points(recon, options.samples, options.seed + 1);

        const Box gt_box = bounding_box({&gt});
        report.tau = options.tau > 0.0 ? options.tau : 0.01 * (gt_box.max - gt_box.min).norm();
        report.chamfer = chamfer(recon_samples.points, gt_samples.points);
        report.f_score = f_score(recon_samples.points, gt_samples.points, report.tau);
        report.normal_consistency = normal_consistency(recon_samples, gt_samples);
        const IouResult iou = volume_iou(recon, gt, options.iou_resolution);
        report.vol_iou = iou.iou;
        if (!iou.warning.empty())
            report.warnings.push_back("volume_iou: " + iou.warning);
        report.alr = area_length_ratio(recon);
        report.manifold = manifoldness_check(recon);
        report.cc_count = connected_components(recon);
        report.cc_diff = cc_diff(recon, gt);
        report.edge_chamfer = edge_chamfer(recon, gt, options.dihedral_degrees, options.samples / 10);
        report.edge_f_score = edge_f_score(recon, gt, options.dihedral_degrees, report.tau, options.samples / 10);
        return report;
    }
}
