#include "tetsplat/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <map>

namespace tetsplat
{
    SurfaceMesh make_icosphere(const Vec3 & center, double radius, int subdivisions)
    {
        if (subdivisions < 0 || !(radius > 0.0))
            throw std::invalid_argument("make_icosphere: bad arguments");
        const double t = (1.0 + std::sqrt(5.0)) / 2.0;
        std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                               {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
        std::vector<Tri> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                              {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                              {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
        for (Vec3 & p : v)
            p.normalize();
        for (int s = 0; s < subdivisions; ++s)
        {
            std::map<std::pair<int, int>, int> midpoint;
            auto mid = [&](int a, int b) {
                const auto key = std::minmax(a, b);
                auto it = midpoint.find(key);
                if (it != midpoint.end())
                    return it->second;
                v.push_back((v[a] + v[b]).normalized());
                return midpoint[key] = static_cast<int>(v.size()) - 1;
            };
            std::vector<Tri> next;
            next.reserve(4 * f.size());
            for (const Tri & tri : f)
            {
                const int ab = mid(tri[0], tri[1]), bc = mid(tri[1], tri[2]), ca = mid(tri[2], tri[0]);
                next.push_back({tri[0], ab, ca});
                next.push_back({tri[1], bc, ab});
                next.push_back({tri[2], ca, bc});
                next.push_back({ab, bc, ca});
            }
            f = std::move(next);
        }
        SurfaceMesh mesh;
        for (const Vec3 & p : v)
            mesh.vertices.push_back(center + radius * p);
        mesh.faces = std::move(f);
        return mesh;
    }

    SurfaceMesh make_torus(double major, double minor, int nu, int nv)
    {
        if (!(major > minor) || !(minor > 0.0) || nu < 3 || nv < 3)
            throw std::invalid_argument("make_torus: bad arguments");
        SurfaceMesh mesh;
        for (int i = 0; i < nu; ++i)
            for (int j = 0; j < nv; ++j)
            {
                const double u = 2.0 * M_PI * i / nu, w = 2.0 * M_PI * j / nv;
                const double ring = major + minor * std::cos(w);
                mesh.vertices.emplace_back(ring * std::cos(u), ring * std::sin(u), minor * std::sin(w));
            }
        auto id = [&](int i, int j) { return ((i % nu) * nv) + (j % nv); };
        for (int i = 0; i < nu; ++i)
            for (int j = 0; j < nv; ++j)
            {
                const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
                mesh.faces.push_back({a, b, c});
                mesh.faces.push_back({a, c, d});
            }
        return mesh;
    }

    SurfaceMesh make_box(const Vec3 & lo, const Vec3 & hi)
    {
        SurfaceMesh mesh;
        for (int k = 0; k < 8; ++k)
            mesh.vertices.emplace_back(k & 1 ? hi.x() : lo.x(), k & 2 ? hi.y() : lo.y(), k & 4 ? hi.z() : lo.z());
        mesh.faces = {{0, 2, 3}, {0, 3, 1}, {4, 5, 7}, {4, 7, 6}, {0, 1, 5}, {0, 5, 4},
                      {2, 6, 7}, {2, 7, 3}, {0, 4, 6}, {0, 6, 2}, {1, 3, 7}, {1, 7, 5}};
        return mesh;
    }

    std::vector<Camera> fibonacci_cameras(int count, double distance, double fov_y_degrees, int width, int height)
    {
        if (count < 1)
            throw std::invalid_argument("fibonacci_cameras: count must be positive");
        std::vector<Camera> cams;
        const double golden = M_PI * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < count; ++i)
        {
            const double z = 1.0 - 2.0 * (i + 0.5) / count;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden * i;
            const Vec3 eye = distance * Vec3(r * std::cos(phi), r * std::sin(phi), z);
            cams.push_back(Camera::look_at(eye, Vec3::Zero(), Vec3::UnitZ(), fov_y_degrees, width, height));
        }
        return cams;
    }

    View render_target_view(const SurfaceMesh & surface, const Camera & camera, const RenderConfig & config)
    {
        View view;
        view.camera = camera;
        view.depth = render_depth(surface, camera, config);
        view.normal = render_normal(surface, camera, config);
        view.mask = Image(camera.width, camera.height, 1, 0.0);
        for (std::size_t p = 0; p < view.mask.data.size(); ++p)
            view.mask.data[p] = view.depth.data[p] != config.background_depth ? 1.0 : 0.0;
        return view;
    }

    std::vector<CameraEntry> write_dataset(const std::filesystem::path & dir, std::span<const View> views)
    {
        std::filesystem::create_directories(dir);
        std::vector<CameraEntry> entries;
        for (std::size_t i = 0; i < views.size(); ++i)
        {
            char name[64];
            CameraEntry e;
            e.camera = views[i].camera;
            std::snprintf(name, sizeof(name), "mask_%03zu.png", i);
            e.mask_path = name;
            write_png_gray(views[i].mask, dir / name);
            if (!views[i].depth.empty())
            {
                std::snprintf(name, sizeof(name), "depth_%03zu.pfm", i);
                e.depth_path = name;
                write_pfm(views[i].depth, dir / name);
            }
            if (!views[i].normal.empty())
            {
                std::snprintf(name, sizeof(name), "normal_%03zu.pfm", i);
                e.normal_path = name;
                write_pfm(views[i].normal, dir / name);
            }
            entries.push_back(std::move(e));
        }
        write_camera_file(entries, dir / "cameras.json");
        return entries;
    }
}
