#include "tetsplat/renderer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Geometry>

namespace tetsplat
{
    namespace
    {
        inline double cross2(const Vec2 & a, const Vec2 & b) { return a.x() * b.y() - a.y() * b.x(); }

        inline double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

        inline double sigmoid(double x)
        {
            if (x >= 0.0)
                return 1.0 / (1.0 + std::exp(-x));
            const double e = std::exp(x);
            return e / (1.0 + e);
        }

        // Screen-space copy of a surface as seen from one camera.
        struct ProjectedMesh
        {
            std::vector<Vec3> cam;   // camera-space positions
            std::vector<Vec2> pix;   // pixel coordinates
            std::vector<double> z;   // depth (= -z_cam)
            std::vector<char> front; // per face: all corners past near plane and facing the camera
        };

        ProjectedMesh project_mesh(const SurfaceMesh & surface, const Camera & camera, const RenderConfig & config)
        {
            const Mat3 & k = camera.intrinsics;
            const Mat3 r = camera.rotation();
            const Vec3 t = camera.translation();
            ProjectedMesh pm;
            const std::size_t nv = surface.vertices.size();
            pm.cam.resize(nv);
            pm.pix.resize(nv);
            pm.z.resize(nv);
            for (std::size_t i = 0; i < nv; ++i)
            {
                const Vec3 c = r * surface.vertices[i] + t;
                pm.cam[i] = c;
                pm.z[i] = -c.z();
                if (pm.z[i] > 0.0)
                {
                    const double xp = c.x() / pm.z[i], yp = c.y() / pm.z[i];
                    pm.pix[i] = {k(0, 0) * xp + k(0, 1) * yp + k(0, 2), k(1, 0) * xp + k(1, 1) * yp + k(1, 2)};
                }
                else
                    pm.pix[i] = Vec2::Zero();
            }
            pm.front.assign(surface.faces.size(), 0);
            for (std::size_t f = 0; f < surface.faces.size(); ++f)
            {
                const auto [a, b, c] = surface.faces[f];
                if (pm.z[a] <= config.near_clip || pm.z[b] <= config.near_clip || pm.z[c] <= config.near_clip)
                    continue;
                const Vec3 n = (pm.cam[b] - pm.cam[a]).cross(pm.cam[c] - pm.cam[a]);
                pm.front[f] = n.dot(-pm.cam[a]) > 0.0 ? 1 : 0;
            }
            return pm;
        }

        struct PixelRange
        {
            int i0, i1, j0, j1; // inclusive
            bool empty() const { return i0 > i1 || j0 > j1; }
        };

        // Pixels whose centers fall inside the triangle's box grown by margin.
        PixelRange pixel_range(const Vec2 & a, const Vec2 & b, const Vec2 & c, double margin, int width, int height)
        {
            const double umin = std::min({a.x(), b.x(), c.x()}) - margin;
            const double umax = std::max({a.x(), b.x(), c.x()}) + margin;
            const double vmin = std::min({a.y(), b.y(), c.y()}) - margin;
            const double vmax = std::max({a.y(), b.y(), c.y()}) + margin;
            auto lo = [](double x, int n) { return static_cast<int>(std::clamp(std::ceil(x - 0.5), 0.0, double(n))); };
            auto hi = [](double x, int n) { return static_cast<int>(std::clamp(std::floor(x - 0.5), -1.0, double(n - 1))); };
            return {lo(umin, width), hi(umax, width), lo(vmin, height), hi(vmax, height)};
        }

        struct EdgeHit
        {
            double d2 = std::numeric_limits<double>::infinity();
            int edge = 0;   // segment (edge, edge+1 mod 3)
            double t = 0.0; // closest point parameter
            Vec2 r = Vec2::Zero(); // p - closest point
        };

        inline EdgeHit closest_edge(const Vec2 * v, const Vec2 & p)
        {
            EdgeHit best;
            for (int e = 0; e < 3; ++e)
            {
                const Vec2 & a = v[e];
                const Vec2 ab = v[(e + 1) % 3] - a;
                const double len2 = ab.squaredNorm();
                const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
                const Vec2 r = p - (a + t * ab);
                const double d2 = r.squaredNorm();
                if (d2 < best.d2)
                    best = {d2, e, t, r};
            }
            return best;
        }

        inline bool strictly_inside(const Vec2 * v, const Vec2 & p)
        {
            const double area2 = cross2(v[1] - v[0], v[2] - v[0]);
            if (area2 == 0.0)
                return false;
            const double w0 = cross2(v[1] - v[0], p - v[0]);
            const double w1 = cross2(v[2] - v[1], p - v[1]);
            const double w2 = cross2(v[0] - v[2], p - v[2]);
            return area2 > 0.0 ? (w0 > 0.0 && w1 > 0.0 && w2 > 0.0) : (w0 < 0.0 && w1 < 0.0 && w2 < 0.0);
        }

        // Visit every (pixel, front face) pair that contributes to the soft silhouette.
        template <typename Visit>
        void for_each_soft_pair(const SurfaceMesh & surface, const ProjectedMesh & pm, int width, int height,
                                const RenderConfig & config, Visit && visit)
        {
            const double cutoff_d2 = config.cutoff_logit * config.sigma;
            const double margin = std::sqrt(cutoff_d2);
            for (std::size_t f = 0; f < surface.faces.size(); ++f)
            {
                if (!pm.front[f])
                    continue;
                const Tri & tri = surface.faces[f];
                const Vec2 v[3] = {pm.pix[tri[0]], pm.pix[tri[1]], pm.pix[tri[2]]};
                const PixelRange range = pixel_range(v[0], v[1], v[2], margin, width, height);
                for (int j = range.j0; j <= range.j1; ++j)
                    for (int i = range.i0; i <= range.i1; ++i)
                    {
                        const Vec2 p(i + 0.5, j + 0.5);
                        const bool inside = strictly_inside(v, p);
                        const EdgeHit hit = closest_edge(v, p);
                        if (!inside && hit.d2 >= cutoff_d2)
                            continue;
                        visit(f, static_cast<std::size_t>(j) * width + i, inside, hit);
                    }
            }
        }

        // log prod_j (1 - D_j) per pixel.
        std::vector<double> soft_log_transmittance(const SurfaceMesh & surface, const ProjectedMesh & pm, int width,
                                                   int height, const RenderConfig & config)
        {
            std::vector<double> logsum(static_cast<std::size_t>(width) * height, 0.0);
            const double inv_sigma = 1.0 / config.sigma;
            for_each_soft_pair(surface, pm, width, height, config,
                               [&](std::size_t, std::size_t pixel, bool inside, const EdgeHit & hit) {
                                   const double x = (inside ? hit.d2 : -hit.d2) * inv_sigma;
                                   logsum[pixel] -= softplus(x);
                               });
            return logsum;
        }

        struct ZBuffer
        {
            std::vector<double> depth;
            std::vector<int> face;              // -1 on background
            std::vector<std::array<double, 3>> bary; // weights of the face's corners in face order
        };

        inline bool owns_edge(const Vec2 & from, const Vec2 & to)
        {
            const Vec2 d = to - from;
            return d.y() > 0.0 || (d.y() == 0.0 && d.x() < 0.0);
        }

        ZBuffer rasterize(const SurfaceMesh & surface, const ProjectedMesh & pm, int width, int height,
                          const RenderConfig & config)
        {
            const std::size_t np = static_cast<std::size_t>(width) * height;
            ZBuffer zb{std::vector<double>(np, std::numeric_limits<double>::infinity()), std::vector<int>(np, -1),
                       std::vector<std::array<double, 3>>(np)};
            for (std::size_t f = 0; f < surface.faces.size(); ++f)
            {
                if (!pm.front[f])
                    continue;
                const Tri & tri = surface.faces[f];
                // Corner order normalised to positive screen area; slot[k] maps back to face order.
                int slot[3] = {0, 1, 2};
                Vec2 v[3] = {pm.pix[tri[0]], pm.pix[tri[1]], pm.pix[tri[2]]};
                double area2 = cross2(v[1] - v[0], v[2] - v[0]);
                if (area2 == 0.0)
                    continue;
                if (area2 < 0.0)
                {
                    std::swap(v[1], v[2]);
                    std::swap(slot[1], slot[2]);
                    area2 = -area2;
                }
                const double zc[3] = {pm.z[tri[slot[0]]], pm.z[tri[slot[1]]], pm.z[tri[slot[2]]]};
                const bool own[3] = {owns_edge(v[1], v[2]), owns_edge(v[2], v[0]), owns_edge(v[0], v[1])};
                const PixelRange range = pixel_range(v[0], v[1], v[2], 0.0, width, height);
                for (int j = range.j0; j <= range.j1; ++j)
                    for (int i = range.i0; i <= range.i1; ++i)
                    {
                        const Vec2 p(i + 0.5, j + 0.5);
                        // w[k]: edge opposite corner k.
                        const double w[3] = {cross2(v[2] - v[1], p - v[1]), cross2(v[0] - v[2], p - v[2]),
                                             cross2(v[1] - v[0], p - v[0])};
                        bool inside = true;
                        for (int k = 0; k < 3 && inside; ++k)
                            inside = w[k] > 0.0 || (w[k] == 0.0 && own[k]);
                        if (!inside)
                            continue;
                        const double b[3] = {w[0] / area2, w[1] / area2, w[2] / area2};
                        const double z = b[0] * zc[0] + b[1] * zc[1] + b[2] * zc[2];
                        const std::size_t pixel = static_cast<std::size_t>(j) * width + i;
                        if (z <= config.near_clip || z >= config.far_clip || z >= zb.depth[pixel])
                            continue;
                        zb.depth[pixel] = z;
                        zb.face[pixel] = static_cast<int>(f);
                        for (int k = 0; k < 3; ++k)
                            zb.bary[pixel][slot[k]] = b[k];
                    }
            }
            return zb;
        }

        Vec3 camera_face_normal(const SurfaceMesh & surface, const ProjectedMesh & pm, std::size_t f, double * length)
        {
            const auto [a, b, c] = surface.faces[f];
            const Vec3 n = (pm.cam[b] - pm.cam[a]).cross(pm.cam[c] - pm.cam[a]);
            const double len = n.norm();
            if (length)
                *length = len;
            return len > 0.0 ? Vec3(n / len) : Vec3::Zero();
        }

        bool has_normal(const Image & normal, std::size_t pixel)
        {
            const double * n = normal.data.data() + 3 * pixel;
            return n[0] != 0.0 || n[1] != 0.0 || n[2] != 0.0;
        }

        struct ViewResult
        {
            double silhouette = 0.0;
            double depth = 0.0;
            double normal = 0.0;
            Eigen::VectorXd gradient;
        };

        ViewResult evaluate_view(const SurfaceMesh & surface, const View & view, const RenderConfig & config,
                                 const LossWeights & weights)
        {
            const Camera & cam = view.camera;
            const int width = cam.width, height = cam.height;
            const std::size_t np = static_cast<std::size_t>(width) * height;
            const std::size_t nv = surface.vertices.size();
            const ProjectedMesh pm = project_mesh(surface, cam, config);

            ViewResult out;
            out.gradient = Eigen::VectorXd::Zero(3 * nv);
            std::vector<Vec2> g_pix(nv, Vec2::Zero()); // dPhi / d(u, v)
            std::vector<Vec3> g_cam(nv, Vec3::Zero()); // dPhi / d camera-space position

            // Silhouette.
            const std::vector<double> logsum = soft_log_transmittance(surface, pm, width, height, config);
            std::vector<double> g_image(np, 0.0);
            for (std::size_t p = 0; p < np; ++p)
            {
                const double residual = (1.0 - std::exp(logsum[p])) - view.mask.data[p];
                out.silhouette += residual * residual;
                g_image[p] = weights.silhouette * 2.0 * residual / static_cast<double>(np);
            }
            out.silhouette /= static_cast<double>(np);

            if (weights.silhouette != 0.0)
            {
                const double inv_sigma = 1.0 / config.sigma;
                for_each_soft_pair(surface, pm, width, height, config,
                                   [&](std::size_t f, std::size_t pixel, bool inside, const EdgeHit & hit) {
                                       if (g_image[pixel] == 0.0)
                                           return;
                                       const double sign = inside ? 1.0 : -1.0;
                                       const double dsoft = sigmoid(sign * hit.d2 * inv_sigma);
                                       // dI/d(d^2) = (1 - I) D delta / sigma
                                       const double g = g_image[pixel] * std::exp(logsum[pixel]) * dsoft * sign * inv_sigma;
                                       const Tri & tri = surface.faces[f];
                                       const int va = tri[hit.edge], vb = tri[(hit.edge + 1) % 3];
                                       g_pix[va] += g * (-2.0 * (1.0 - hit.t)) * hit.r;
                                       g_pix[vb] += g * (-2.0 * hit.t) * hit.r;
                                   });
            }

            const bool use_depth = weights.depth != 0.0 && !view.depth.empty();
            const bool use_normal = weights.normal != 0.0 && !view.normal.empty();
            if (use_depth || use_normal)
            {
                const ZBuffer zb = rasterize(surface, pm, width, height, config);
                if (use_depth)
                {
                    std::size_t joint = 0;
                    for (std::size_t p = 0; p < np; ++p)
                        if (zb.face[p] >= 0 && view.depth.data[p] != config.background_depth)
                            ++joint;
                    for (std::size_t p = 0; p < np && joint > 0; ++p)
                    {
                        if (zb.face[p] < 0 || view.depth.data[p] == config.background_depth)
                            continue;
                        const double residual = zb.depth[p] - view.depth.data[p];
                        out.depth += residual * residual / static_cast<double>(joint);
                        const double gz = weights.depth * 2.0 * residual / static_cast<double>(joint);
                        const Tri & tri = surface.faces[zb.face[p]];
                        const auto & b = zb.bary[p];
                        // Screen gradient of the interpolated depth over this face.
                        const Vec2 & a0 = pm.pix[tri[0]], & a1 = pm.pix[tri[1]], & a2 = pm.pix[tri[2]];
                        const double area2 = cross2(a1 - a0, a2 - a0);
                        auto perp = [](const Vec2 & e) { return Vec2(-e.y(), e.x()); };
                        const Vec2 grad_z = (pm.z[tri[0]] * perp(a2 - a1) + pm.z[tri[1]] * perp(a0 - a2) +
                                             pm.z[tri[2]] * perp(a1 - a0)) /
                                            area2;
                        for (int k = 0; k < 3; ++k)
                        {
                            g_cam[tri[k]].z() -= gz * b[k]; // depth = -z_cam
                            g_pix[tri[k]] -= gz * b[k] * grad_z;
                        }
                    }
                }
                if (use_normal)
                {
                    std::size_t joint = 0;
                    for (std::size_t p = 0; p < np; ++p)
                        if (zb.face[p] >= 0 && has_normal(view.normal, p))
                            ++joint;
                    std::vector<Vec3> g_face(surface.faces.size(), Vec3::Zero());
                    std::vector<char> touched(surface.faces.size(), 0);
                    for (std::size_t p = 0; p < np && joint > 0; ++p)
                    {
                        if (zb.face[p] < 0 || !has_normal(view.normal, p))
                            continue;
                        double len = 0.0;
                        const Vec3 n = camera_face_normal(surface, pm, zb.face[p], &len);
                        const Vec3 target(view.normal.data[3 * p], view.normal.data[3 * p + 1],
                                          view.normal.data[3 * p + 2]);
                        const double cosine = n.dot(target);
                        out.normal += (1.0 - cosine) / static_cast<double>(joint);
                        if (len > 0.0)
                        {
                            g_face[zb.face[p]] -=
                                weights.normal / static_cast<double>(joint) * (target - cosine * n) / len;
                            touched[zb.face[p]] = 1;
                        }
                    }
                    for (std::size_t f = 0; f < surface.faces.size(); ++f)
                    {
                        if (!touched[f])
                            continue;
                        const auto [a, b, c] = surface.faces[f];
                        const Vec3 & g = g_face[f];
                        const Vec3 gb = (pm.cam[c] - pm.cam[a]).cross(g);
                        const Vec3 gc = g.cross(pm.cam[b] - pm.cam[a]);
                        g_cam[b] += gb;
                        g_cam[c] += gc;
                        g_cam[a] -= gb + gc;
                    }
                }
            }

            // Chain pixel gradients through the projection and rotate back to world.
            const Mat3 & k = cam.intrinsics;
            const Mat3 rt = cam.rotation().transpose();
            for (std::size_t i = 0; i < nv; ++i)
            {
                Vec3 g = g_cam[i];
                if (g_pix[i] != Vec2::Zero() && pm.z[i] > 0.0)
                {
                    const double z = pm.z[i];
                    const double gx = k(0, 0) * g_pix[i].x() + k(1, 0) * g_pix[i].y();
                    const double gy = k(0, 1) * g_pix[i].x() + k(1, 1) * g_pix[i].y();
                    g.x() += gx / z;
                    g.y() += gy / z;
                    g.z() += (gx * pm.cam[i].x() + gy * pm.cam[i].y()) / (z * z);
                }
                if (g != Vec3::Zero())
                    out.gradient.segment<3>(3 * i) = rt * g;
            }
            return out;
        }
    }

    void Camera::validate() const
    {
        if (width <= 0 || height <= 0)
            throw std::invalid_argument("camera image size must be positive");
        if (!(intrinsics(0, 0) > 0.0) || !(intrinsics(1, 1) > 0.0))
            throw std::invalid_argument("camera focal lengths must be positive");
        if (intrinsics(2, 0) != 0.0 || intrinsics(2, 1) != 0.0 || intrinsics(2, 2) != 1.0)
            throw std::invalid_argument("camera intrinsics last row must be (0, 0, 1)");
        const Mat3 r = rotation();
        if ((r.transpose() * r - Mat3::Identity()).norm() >= 1e-6 || r.determinant() <= 0.0)
            throw std::invalid_argument("camera rotation is not orthonormal");
        if (world_to_camera.row(3) != Eigen::RowVector4d(0, 0, 0, 1))
            throw std::invalid_argument("world_to_camera last row must be (0, 0, 0, 1)");
    }

    Camera Camera::look_at(const Vec3 & eye, const Vec3 & target, const Vec3 & up, double fov_y_degrees, int width,
                           int height)
    {
        const Vec3 zc = (eye - target).normalized();
        Vec3 xc = up.cross(zc);
        if (xc.norm() < 1e-9)
            xc = (std::abs(zc.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY()).cross(zc);
        xc.normalize();
        const Vec3 yc = zc.cross(xc);

        Camera cam;
        Mat3 r;
        r.row(0) = xc;
        r.row(1) = yc;
        r.row(2) = zc;
        cam.world_to_camera.setIdentity();
        cam.world_to_camera.topLeftCorner<3, 3>() = r;
        cam.world_to_camera.topRightCorner<3, 1>() = -r * eye;
        const double f = 0.5 * height / std::tan(0.5 * fov_y_degrees * M_PI / 180.0);
        cam.intrinsics << f, 0.0, 0.5 * width, 0.0, f, 0.5 * height, 0.0, 0.0, 1.0;
        cam.width = width;
        cam.height = height;
        return cam;
    }

    Projection project(const Camera & camera, const Vec3 & point)
    {
        const Vec3 c = camera.to_camera(point);
        Projection p;
        p.depth = -c.z();
        p.in_front = p.depth > 0.0;
        if (p.in_front)
        {
            const Mat3 & k = camera.intrinsics;
            const double xp = c.x() / p.depth, yp = c.y() / p.depth;
            p.pixel = {k(0, 0) * xp + k(0, 1) * yp + k(0, 2), k(1, 0) * xp + k(1, 1) * yp + k(1, 2)};
        }
        return p;
    }

    void View::validate() const
    {
        camera.validate();
        auto check = [&](const Image & img, int channels, const char * what) {
            if (img.empty())
                return;
            if (img.width != camera.width || img.height != camera.height || img.channels != channels)
                throw std::invalid_argument(std::string(what) + " image does not match the camera");
        };
        if (mask.empty())
            throw std::invalid_argument("view has no mask");
        check(mask, 1, "mask");
        check(depth, 1, "depth");
        check(normal, 3, "normal");
        for (std::size_t p = 0; p < normal.pixel_count(); ++p)
            if (has_normal(normal, p))
            {
                const double len = Vec3(normal.data[3 * p], normal.data[3 * p + 1], normal.data[3 * p + 2]).norm();
                if (std::abs(len - 1.0) > 1e-3)
                    throw std::invalid_argument("normal image has a non-unit normal");
            }
    }

    void RenderConfig::validate() const
    {
        if (!(sigma > 0.0))
            throw std::invalid_argument("RenderConfig: sigma must be positive");
        if (!(near_clip < far_clip))
            throw std::invalid_argument("RenderConfig: near must be below far");
        if (!(cutoff_logit > 0.0))
            throw std::invalid_argument("RenderConfig: cutoff_logit must be positive");
    }

    double RenderConfig::cutoff_radius() const
    {
        return std::sqrt(cutoff_logit * sigma);
    }

    Image render_silhouette_soft(const SurfaceMesh & surface, const Camera & camera, const RenderConfig & config)
    {
        config.validate();
        Image image(camera.width, camera.height, 1, 0.0);
        if (surface.empty())
            return image;
        const ProjectedMesh pm = project_mesh(surface, camera, config);
        const std::vector<double> logsum = soft_log_transmittance(surface, pm, camera.width, camera.height, config);
        for (std::size_t p = 0; p < logsum.size(); ++p)
            image.data[p] = 1.0 - std::exp(logsum[p]);
        return image;
    }

    Image render_depth(const SurfaceMesh & surface, const Camera & camera, const RenderConfig & config)
    {
        config.validate();
        Image image(camera.width, camera.height, 1, config.background_depth);
        if (surface.empty())
            return image;
        const ProjectedMesh pm = project_mesh(surface, camera, config);
        const ZBuffer zb = rasterize(surface, pm, camera.width, camera.height, config);
        for (std::size_t p = 0; p < image.data.size(); ++p)
            if (zb.face[p] >= 0)
                image.data[p] = zb.depth[p];
        return image;
    }

    Image render_normal(const SurfaceMesh & surface, const Camera & camera, const RenderConfig & config)
    {
        config.validate();
        Image image(camera.width, camera.height, 3, 0.0);
        if (surface.empty())
            return image;
        const ProjectedMesh pm = project_mesh(surface, camera, config);
        const ZBuffer zb = rasterize(surface, pm, camera.width, camera.height, config);
        for (std::size_t p = 0; p < zb.face.size(); ++p)
            if (zb.face[p] >= 0)
            {
                const Vec3 n = camera_face_normal(surface, pm, zb.face[p], nullptr);
                for (int c = 0; c < 3; ++c)
                    image.data[3 * p + c] = n[c];
            }
        return image;
    }

    RenderLoss render_loss_and_grad(const SurfaceMesh & surface, std::span<const View> views,
                                    const RenderConfig & config, const LossWeights & weights)
    {
        if (views.empty())
            throw std::invalid_argument("render_loss_and_grad: at least one view is required");
        config.validate();
        for (const View & v : views)
            v.validate();

        std::vector<ViewResult> results(views.size());
#if defined(TETSPLAT_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic)
#endif
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(views.size()); ++i)
            results[i] = evaluate_view(surface, views[i], config, weights);

        RenderLoss loss;
        loss.gradient = Eigen::VectorXd::Zero(3 * static_cast<Eigen::Index>(surface.vertices.size()));
        for (const ViewResult & r : results)
        {
            loss.silhouette += r.silhouette;
            loss.depth += r.depth;
            loss.normal += r.normal;
            loss.gradient += r.gradient;
        }
        loss.total = weights.silhouette * loss.silhouette + weights.depth * loss.depth + weights.normal * loss.normal;
        return loss;
    }

    RenderLoss render_loss_and_grad(const UnionTopology & topology, const Eigen::VectorXd & x,
                                    std::span<const View> views, const RenderConfig & config,
                                    const LossWeights & weights)
    {
        const SurfaceMesh surface = topology.surface(x);
        RenderLoss surface_loss = render_loss_and_grad(surface, views, config, weights);
        RenderLoss loss = surface_loss;
        loss.gradient = Eigen::VectorXd::Zero(x.size());
        for (std::size_t i = 0; i < topology.vertex_ids.size(); ++i)
            loss.gradient.segment<3>(3 * static_cast<Eigen::Index>(topology.vertex_ids[i])) +=
                surface_loss.gradient.segment<3>(3 * static_cast<Eigen::Index>(i));
        return loss;
    }

    RenderLoss render_loss_and_grad(const TetSphereSet & set, std::span<const View> views,
                                    const RenderConfig & config, const LossWeights & weights)
    {
        return render_loss_and_grad(union_topology(set), set.positions(), views, config, weights);
    }
}
