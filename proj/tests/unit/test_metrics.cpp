#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Geometry>

#include "helpers.hpp"
#include "tetsplat/metrics.hpp"
#include "tetsplat/synthetic.hpp"

using namespace tetsplat;

namespace
{
    std::vector<Vec3> random_points(std::size_t n, std::uint64_t seed)
    {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<Vec3> p(n);
        for (Vec3 & q : p)
            q = Vec3(u(rng), u(rng), u(rng));
        return p;
    }

    double brute_nearest(const Vec3 & q, const std::vector<Vec3> & pts)
    {
        double best = std::numeric_limits<double>::infinity();
        for (const Vec3 & p : pts)
            best = std::min(best, (p - q).norm());
        return best;
    }

    SurfaceMesh single_triangle(const Vec3 & a, const Vec3 & b, const Vec3 & c)
    {
        SurfaceMesh s;
        s.vertices = {a, b, c};
        s.faces = {{0, 1, 2}};
        return s;
    }

    SurfaceMesh join(SurfaceMesh a, const SurfaceMesh & b)
    {
        const int offset = static_cast<int>(a.vertices.size());
        a.vertices.insert(a.vertices.end(), b.vertices.begin(), b.vertices.end());
        for (Tri f : b.faces)
            a.faces.push_back({f[0] + offset, f[1] + offset, f[2] + offset});
        return a;
    }
}

TEST_CASE("kd-tree agrees with brute force")
{
    const std::vector<Vec3> pts = random_points(500, 1);
    const KdTree tree(pts);
    for (const Vec3 & q : random_points(200, 2))
    {
        const auto [index, dist2] = tree.nearest(q);
        const double brute = brute_nearest(q, pts);
        CHECK(dist2 == doctest::Approx(brute * brute).epsilon(1e-14));
        CHECK((pts[index] - q).squaredNorm() == dist2);
    }
    // Ties go to the lower index.
    const std::vector<Vec3> dup{Vec3(1, 0, 0), Vec3(0, 0, 0), Vec3(0, 0, 0)};
    CHECK(KdTree(dup).nearest(Vec3(0, 0, 0.1)).first == 1);
}

TEST_CASE("area-length ratio")
{
    // tests/oracles/closed_form.py
    const SurfaceMesh eq = single_triangle(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.5, std::sqrt(3.0) / 2.0, 0));
    CHECK(std::abs(area_length_ratio(eq) - 1.0) < 1e-12);
    const SurfaceMesh right = single_triangle(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0));
    CHECK(area_length_ratio(right) == doctest::Approx(0.7174389352143009).epsilon(1e-12));
    CHECK_THROWS_AS(area_length_ratio(SurfaceMesh{}), std::invalid_argument);
}

TEST_CASE("manifoldness")
{
    CHECK(manifoldness_check(make_icosphere(Vec3::Zero(), 1.0, 2)));
    CHECK(manifoldness_check(make_torus(0.6, 0.2, 24, 12)));
    CHECK(manifoldness_check(make_box(Vec3::Zero(), Vec3::Ones())));
    // Open surface: boundary edges.
    CHECK_FALSE(manifoldness_check(single_triangle(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0))));
    // Two closed boxes sharing one corner vertex: every edge is fine but the
    // shared vertex has two fans.
    SurfaceMesh a = make_box(Vec3::Zero(), Vec3::Ones());
    SurfaceMesh b = make_box(Vec3::Ones(), Vec3::Constant(2.0));
    SurfaceMesh pinched = join(a, b);
    int corner_a = -1, corner_b = -1;
    for (int i = 0; i < static_cast<int>(pinched.vertices.size()); ++i)
        if ((pinched.vertices[i] - Vec3::Ones()).norm() == 0.0)
            (corner_a < 0 ? corner_a : corner_b) = i;
    REQUIRE(corner_b >= 0);
    for (Tri & f : pinched.faces)
        for (int & v : f)
            if (v == corner_b)
                v = corner_a;
    CHECK_FALSE(manifoldness_check(pinched));
}

TEST_CASE("connected components")
{
    const SurfaceMesh one = make_icosphere(Vec3::Zero(), 0.5, 1);
    const SurfaceMesh two = join(one, make_icosphere(Vec3(2, 0, 0), 0.5, 1));
    std::vector<int> labels;
    CHECK(connected_components(two, &labels) == 2);
    CHECK(labels.size() == two.num_faces());
    CHECK(labels.front() != labels.back());
    CHECK(cc_diff(two, one) == 1);
    CHECK(cc_diff(one, two) == 1);
    CHECK(cc_diff(one, one) == 0);
}

TEST_CASE("sampling splits evenly between equal-area triangles")
{
    SurfaceMesh two;
    two.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(5, 0, 0), Vec3(5, 1, 0), Vec3(4, 0, 0)};
    two.faces = {{0, 1, 2}, {3, 4, 5}};
    const SurfaceSamples s = sample_surface_points(two, 10000, 9);
    REQUIRE(s.points.size() == 10000);
    std::size_t left = 0;
    for (const Vec3 & p : s.points)
        left += p.x() < 2.5;
    CHECK(left >= 4500);
    CHECK(left <= 5500);
    // Same seed, same samples.
    CHECK(sample_surface_points(two, 100, 4).points == sample_surface_points(two, 100, 4).points);
}

TEST_CASE("chamfer and f-score match brute force")
{
    for (std::uint64_t seed = 0; seed < 5; ++seed)
    {
        const std::vector<Vec3> a = random_points(100, 10 + seed);
        const std::vector<Vec3> b = random_points(100, 20 + seed);
        double ab = 0.0, ba = 0.0;
        std::size_t ha = 0, hb = 0;
        const double tau = 0.2;
        for (const Vec3 & p : a)
        {
            const double d = brute_nearest(p, b);
            ab += d;
            ha += d < tau;
        }
        for (const Vec3 & p : b)
        {
            const double d = brute_nearest(p, a);
            ba += d;
            hb += d < tau;
        }
        const double expected_chamfer = 0.5 * (ab / 100.0 + ba / 100.0);
        CHECK(std::abs(chamfer(a, b) - expected_chamfer) < 1e-12);
        const double precision = ha / 100.0, recall = hb / 100.0;
        const double expected_f = precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
        CHECK(std::abs(f_score(a, b, tau) - expected_f) < 1e-12);
    }
}

TEST_CASE("f-score is 1/2 when half the points are off by twice tau")
{
    const double tau = 0.01;
    std::vector<Vec3> gt, recon;
    for (int i = 0; i < 100; ++i)
    {
        const Vec3 p(i * 1.0, 0.0, 0.0);
        gt.push_back(p);
        recon.push_back(i % 2 == 0 ? p : p + Vec3(0.0, 2.0 * tau, 0.0));
    }
    CHECK(f_score(recon, gt, tau) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("normal consistency")
{
    SurfaceMesh plane;
    plane.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)};
    plane.faces = {{0, 1, 2}, {0, 2, 3}};
    CHECK(normal_consistency(plane, plane, 1000, 1) == doctest::Approx(1.0));
    SurfaceMesh flipped = plane;
    for (Tri & f : flipped.faces)
        std::swap(f[1], f[2]);
    CHECK(normal_consistency(plane, flipped, 1000, 1) == doctest::Approx(1.0)); // orientation agnostic
    SurfaceMesh orthogonal;
    orthogonal.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 0, 1), Vec3(0, 0, 1)};
    orthogonal.faces = {{0, 1, 2}, {0, 2, 3}};
    CHECK(normal_consistency(plane, orthogonal, 1000, 1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("volume IoU of half-shifted cubes is 1/3")
{
    const SurfaceMesh a = make_box(Vec3::Zero(), Vec3::Ones());
    const SurfaceMesh b = make_box(Vec3(0.5, 0, 0), Vec3(1.5, 1, 1));
    CHECK(std::abs(volume_iou(a, b, 64).iou - 1.0 / 3.0) < 0.02);
    CHECK(volume_iou(a, a, 32).iou == doctest::Approx(1.0));
    const SurfaceMesh far = make_box(Vec3::Constant(5.0), Vec3::Constant(6.0));
    CHECK(volume_iou(a, far, 32).iou == doctest::Approx(0.0));
}

TEST_CASE("open meshes get an IoU warning")
{
    const SurfaceMesh open = single_triangle(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0));
    const SurfaceMesh box = make_box(Vec3::Zero(), Vec3::Ones());
    CHECK_FALSE(volume_iou(open, box, 16).warning.empty());
}

TEST_CASE("sharp edges")
{
    const SurfaceMesh cube = make_box(Vec3::Constant(-0.5), Vec3::Constant(0.5));
    const std::vector<Vec3> pts = sharp_edge_points(cube, 30.0, 120);
    CHECK(pts.size() == 120);
    for (const Vec3 & p : pts) // every sample lies on a cube edge: two coordinates at +-0.5
    {
        int on = 0;
        for (int c = 0; c < 3; ++c)
            on += std::abs(std::abs(p[c]) - 0.5) < 1e-12;
        CHECK(on >= 2);
    }

    // Rotating the cube 90 degrees maps its edge set onto itself.
    const Mat3 r = Eigen::AngleAxisd(M_PI / 2.0, Vec3::UnitZ()).toRotationMatrix();
    const SurfaceMesh rotated = transformed(cube, RigidTransform{r, Vec3::Zero()});
    const std::optional<double> ec = edge_chamfer(cube, rotated, 30.0, 120);
    REQUIRE(ec.has_value());
    CHECK(*ec < 1e-12);

    // A fine sphere has no sharp edges.
    const SurfaceMesh sphere = make_icosphere(Vec3::Zero(), 1.0, 3);
    CHECK(sharp_edge_points(sphere, 30.0, 100).empty());
    CHECK_FALSE(edge_chamfer(sphere, cube, 30.0, 100).has_value());
    CHECK_FALSE(edge_f_score(sphere, cube, 30.0, 0.01, 100).has_value());
}

TEST_CASE("ICP recovers a known rigid motion")
{
    const SurfaceMesh shape = make_box(Vec3(-0.5, -0.3, -0.2), Vec3(0.5, 0.3, 0.2));
    const std::vector<Vec3> target = sample_surface_points(shape, 2000, 3).points;
    const Mat3 r = (Eigen::AngleAxisd(0.2, Vec3(1, 2, 3).normalized())).toRotationMatrix();
    const Vec3 t(0.05, -0.1, 0.08);
    std::vector<Vec3> source;
    for (const Vec3 & p : target)
        source.push_back(r * p + t);
    const IcpResult result = icp_align(source, target);
    CHECK(result.warning.empty());
    CHECK((result.transform.rotation - r.transpose()).norm() < 1e-4);
    CHECK((result.transform.translation + r.transpose() * t).norm() < 1e-4);
    CHECK(result.rmse < 1e-6);
}

TEST_CASE("ICP on degenerate input falls back to identity with a warning")
{
    std::vector<Vec3> line;
    for (int i = 0; i < 20; ++i)
        line.push_back(Vec3(i * 0.1, 0, 0));
    const IcpResult result = icp_align(line, line);
    CHECK_FALSE(result.warning.empty());
    CHECK((result.transform.rotation - Mat3::Identity()).norm() < 1e-12);
}

TEST_CASE("evaluate on a sphere against itself")
{
    const SurfaceMesh sphere = make_icosphere(Vec3::Zero(), 0.5, 3);
    MetricOptions options;
    options.samples = 5000;
    options.iou_resolution = 32;
    const MetricReport r = evaluate(sphere, sphere, options);
    // Two independent 5000-point samplings: the floor is the sample spacing.
    CHECK(r.chamfer < 0.02);
    CHECK(r.f_score > 0.5);
    CHECK(r.vol_iou > 0.95);
    CHECK(r.manifold);
    CHECK(r.cc_diff == 0);
    CHECK(r.tau == doctest::Approx(0.01 * std::sqrt(3.0)).epsilon(0.01));
    CHECK_FALSE(r.edge_chamfer.has_value());
    const std::string json = r.to_json();
    CHECK(json.find("no-sharp-edges") != std::string::npos);
    CHECK(json.find("\"chamfer\"") != std::string::npos);
}

TEST_CASE("evaluate sphere versus cube")
{
    const SurfaceMesh sphere = make_icosphere(Vec3::Zero(), 0.5, 3);
    const SurfaceMesh cube = make_box(Vec3::Constant(-0.5), Vec3::Constant(0.5));
    MetricOptions options;
    options.samples = 5000;
    options.icp = false;
    const MetricReport r = evaluate(sphere, cube, options);
    // Sphere volume over cube volume: (4/3) pi 0.125 = 0.5236.
    CHECK(r.vol_iou == doctest::Approx(M_PI / 6.0).epsilon(0.03));
    CHECK(r.alr == doctest::Approx(area_length_ratio(sphere)));
    CHECK(r.manifold);
    CHECK_FALSE(r.edge_chamfer.has_value()); // recon has no sharp edges
}
