#include <doctest.h>

#include <cmath>

#include <Eigen/Geometry>

#include "helpers.hpp"
#include "tetsplat/renderer.hpp"
#include "tetsplat/synthetic.hpp"

using namespace tetsplat;

namespace
{
    // Camera at the origin looking down -z with focal f and principal point at
    // the image center.
    Camera front_camera(int size, double f)
    {
        Camera cam;
        cam.width = cam.height = size;
        cam.intrinsics << f, 0, 0.5 * size, 0, f, 0.5 * size, 0, 0, 1;
        return cam;
    }

    SurfaceMesh triangle(const Vec3 & a, const Vec3 & b, const Vec3 & c)
    {
        SurfaceMesh s;
        s.vertices = {a, b, c};
        s.faces = {{0, 1, 2}};
        return s;
    }

    Eigen::VectorXd fd_gradient(SurfaceMesh mesh, std::span<const View> views, const RenderConfig & config,
                                const LossWeights & w, double h)
    {
        Eigen::VectorXd g(3 * mesh.num_vertices());
        for (std::size_t v = 0; v < mesh.num_vertices(); ++v)
            for (int c = 0; c < 3; ++c)
            {
                const double keep = mesh.vertices[v][c];
                mesh.vertices[v][c] = keep + h;
                const double plus = render_loss_and_grad(mesh, views, config, w).total;
                mesh.vertices[v][c] = keep - h;
                const double minus = render_loss_and_grad(mesh, views, config, w).total;
                mesh.vertices[v][c] = keep;
                g[3 * v + c] = (plus - minus) / (2.0 * h);
            }
        return g;
    }
}

TEST_CASE("projection matches the reference matrix multiply")
{
    // tests/oracles/closed_form.py
    Camera cam;
    cam.width = 64;
    cam.height = 48;
    cam.intrinsics << 100.0, 0.5, 32.0, 0, 110.0, 24.0, 0, 0, 1;
    const Mat3 r = (Eigen::AngleAxisd(0.3, Vec3::UnitZ()) * Eigen::AngleAxisd(0.2, Vec3::UnitX())).toRotationMatrix();
    cam.world_to_camera.topLeftCorner<3, 3>() = r;
    cam.world_to_camera.topRightCorner<3, 1>() = Vec3(0.1, -0.2, -3.0);
    cam.validate();
    const Projection p = project(cam, Vec3(0.3, -0.4, 0.25));
    CHECK(p.in_front);
    CHECK(p.pixel.x() == doctest::Approx(50.150388585706).epsilon(1e-12));
    CHECK(p.pixel.y() == doctest::Approx(3.30317686337887).epsilon(1e-12));
    CHECK(p.depth == doctest::Approx(2.83445108785771).epsilon(1e-12));
}

TEST_CASE("camera validation")
{
    Camera cam = front_camera(16, 10.0);
    CHECK_NOTHROW(cam.validate());
    Camera bad = cam;
    bad.intrinsics(0, 0) = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cam;
    bad.world_to_camera(0, 0) = 2.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cam;
    bad.width = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    const Camera look = Camera::look_at(Vec3(0, 0, 3), Vec3::Zero(), Vec3::UnitY(), 60.0, 32, 32);
    CHECK_NOTHROW(look.validate());
    const Projection origin = project(look, Vec3::Zero());
    CHECK(origin.pixel.x() == doctest::Approx(16.0));
    CHECK(origin.pixel.y() == doctest::Approx(16.0));
    CHECK(origin.depth == doctest::Approx(3.0));
    CHECK_FALSE(project(look, Vec3(0, 0, 5)).in_front);
}

TEST_CASE("pixel far outside a triangle is essentially zero")
{
    // sigmoid(-100) = 3.7e-44 for d = 10 px and sigma = 1.
    const Camera cam = front_camera(40, 10.0);
    // At depth 1, u = 10x + 20: the right edge x = -0.05 lands on u = 19.5.
    const SurfaceMesh tri = triangle(Vec3(-2.0, -1.0, -1.0), Vec3(-0.05, -1.0, -1.0), Vec3(-0.05, 1.0, -1.0));
    RenderConfig config;
    config.sigma = 1.0;
    const Image img = render_silhouette_soft(tri, cam, config);
    // Pixel center (29.5, 20.5) is 10 px right of that edge.
    CHECK(img.at(29, 20) <= 3.72e-44);
    CHECK(img.at(15, 15) > 0.99);
}

TEST_CASE("soft silhouette is symmetric across an edge")
{
    const Camera cam = front_camera(32, 16.0);
    // Square half plane: big triangle whose right edge is x = 0 (u = 16).
    const SurfaceMesh tri = triangle(Vec3(-10, -10, -1), Vec3(0, -10, -1), Vec3(0, 10, -1));
    SurfaceMesh quad = tri;
    quad.vertices.push_back(Vec3(-10, 10, -1));
    quad.faces.push_back({0, 2, 3});
    RenderConfig config;
    config.sigma = 2.0;
    const Image img = render_silhouette_soft(quad, cam, config);
    const double inside = img.at(15, 16);  // center 0.5 px inside
    const double outside = img.at(16, 16); // center 0.5 px outside
    const double s = 1.0 / (1.0 + std::exp(-0.25 / 2.0));
    CHECK(inside == doctest::Approx(s).epsilon(1e-9));
    CHECK(outside == doctest::Approx(1.0 - s).epsilon(1e-9));
}

TEST_CASE("depth of a fronto-parallel plane is constant")
{
    const Camera cam = front_camera(16, 8.0);
    SurfaceMesh quad;
    quad.vertices = {Vec3(-5, -5, -2.5), Vec3(5, -5, -2.5), Vec3(5, 5, -2.5), Vec3(-5, 5, -2.5)};
    quad.faces = {{0, 1, 2}, {0, 2, 3}};
    const RenderConfig config;
    const Image d = render_depth(quad, cam, config);
    for (double v : d.data)
        CHECK(v == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("nearest surface wins the z-buffer")
{
    const Camera cam = front_camera(16, 8.0);
    SurfaceMesh s;
    s.vertices = {Vec3(-5, -5, -3), Vec3(5, -5, -3), Vec3(0, 5, -3), Vec3(-5, -5, -2), Vec3(5, -5, -2), Vec3(0, 5, -2)};
    s.faces = {{0, 1, 2}, {3, 4, 5}};
    const Image d = render_depth(s, cam, RenderConfig{});
    CHECK(d.at(8, 8) == doctest::Approx(2.0));
    CHECK(d.at(0, 15) == 0.0); // background
}

TEST_CASE("tilted quad renders its analytic normal")
{
    const Camera cam = front_camera(32, 16.0);
    // Plane through z = -3 tilted 45 degrees about the y axis.
    const double c = std::sqrt(0.5);
    SurfaceMesh quad;
    quad.vertices = {Vec3(-1, -1, -3 - 1), Vec3(1, -1, -3 + 1), Vec3(1, 1, -3 + 1), Vec3(-1, 1, -3 - 1)};
    quad.faces = {{0, 1, 2}, {0, 2, 3}};
    const Vec3 expected(-c, 0.0, c);
    const Image n = render_normal(quad, cam, RenderConfig{});
    int covered = 0;
    for (int v = 0; v < 32; ++v)
        for (int u = 0; u < 32; ++u)
        {
            const Vec3 got(n.at(u, v, 0), n.at(u, v, 1), n.at(u, v, 2));
            if (got.squaredNorm() == 0.0)
                continue;
            ++covered;
            CHECK((got - expected).norm() < 1e-6);
        }
    CHECK(covered > 50);
}

TEST_CASE("back faces are culled")
{
    const Camera cam = front_camera(16, 8.0);
    const SurfaceMesh away = triangle(Vec3(-5, -5, -2), Vec3(0, 5, -2), Vec3(5, -5, -2));
    CHECK(render_depth(away, cam, RenderConfig{}).at(8, 8) == 0.0);
    const Image soft = render_silhouette_soft(away, cam, RenderConfig{});
    for (double v : soft.data)
        CHECK(v == 0.0);
}

TEST_CASE("render loss gradient matches central differences")
{
    const Camera cam = front_camera(16, 12.0);
    SurfaceMesh target;
    target.vertices = {Vec3(-0.5, -0.5, -2), Vec3(0.6, -0.4, -2.2), Vec3(0.5, 0.5, -2.1), Vec3(-0.4, 0.6, -1.9)};
    target.faces = {{0, 1, 2}, {0, 2, 3}};
    RenderConfig config;
    config.sigma = 0.8;
    std::vector<View> views{render_target_view(target, cam, config)};
    views[0].normal = Image();

    SurfaceMesh mesh = target;
    mesh.vertices[0] += Vec3(0.07, -0.03, 0.05);
    mesh.vertices[2] += Vec3(-0.05, 0.06, -0.04);
    const LossWeights w{1.0, 0.5, 0.0};
    const RenderLoss loss = render_loss_and_grad(mesh, views, config, w);
    CHECK(loss.total > 0.0);
    const Eigen::VectorXd fd = fd_gradient(mesh, views, config, w, 1e-6);
    CHECK(test::relative_error(loss.gradient, fd) < 1e-3);
}

TEST_CASE("moving a triangle away from its mask raises the loss monotonically")
{
    const Camera cam = front_camera(24, 16.0);
    const SurfaceMesh tri = triangle(Vec3(-0.5, -0.5, -2), Vec3(0.5, -0.5, -2), Vec3(0.0, 0.5, -2));
    RenderConfig config;
    config.sigma = 1.0;
    std::vector<View> views{render_target_view(tri, cam, config)};
    views[0].depth = Image();
    views[0].normal = Image();
    double previous = -1.0;
    for (int step = 0; step <= 5; ++step)
    {
        SurfaceMesh moved = tri;
        for (Vec3 & p : moved.vertices)
            p.x() += 0.1 * step;
        const double loss = render_loss_and_grad(moved, views, config, LossWeights{1.0, 0.0, 0.0}).silhouette;
        CHECK(loss > previous);
        previous = loss;
    }
}

TEST_CASE("render config validation")
{
    RenderConfig c;
    CHECK_NOTHROW(c.validate());
    c.sigma = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = RenderConfig{};
    c.near_clip = 5.0;
    c.far_clip = 1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
