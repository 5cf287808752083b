// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. Pass criterion numbers as arguments to
// run a subset, e.g. `acceptance 1 6 8`.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <set>
#include <string>

#include <Eigen/Geometry>

#include "tetsplat/deformation.hpp"
#include "tetsplat/init.hpp"
#include "tetsplat/metrics.hpp"
#include "tetsplat/optimizer.hpp"
#include "tetsplat/synthetic.hpp"
#include "tetsplat/view_io.hpp"

using namespace tetsplat;
namespace fs = std::filesystem;

namespace
{
    struct Outcome
    {
        bool pass = false;
        std::string detail;
    };

    std::string fmt(const char * format, ...) __attribute__((format(printf, 1, 2)));
    std::string fmt(const char * format, ...)
    {
        char buf[512];
        va_list args;
        va_start(args, format);
        std::vsnprintf(buf, sizeof(buf), format, args);
        va_end(args);
        return buf;
    }

    double seconds_since(std::chrono::steady_clock::time_point t0)
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    double relative_error(const Eigen::VectorXd & a, const Eigen::VectorXd & b)
    {
        return (a - b).norm() / std::max(b.norm(), 1e-300);
    }

    Mat3 random_rotation(std::mt19937_64 & rng)
    {
        std::normal_distribution<double> n;
        Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
        return q.normalized().toRotationMatrix();
    }

    // ------------------------------------------------------------------ 1

    // Kuhn-split lattice block of nx*ny*nz cells with jittered rest positions.
    TetMesh random_block_mesh(std::mt19937_64 & rng)
    {
        std::uniform_int_distribution<int> dim(2, 4);
        int nx, ny, nz;
        do
        {
            nx = dim(rng);
            ny = dim(rng);
            nz = dim(rng);
        } while (6 * nx * ny * nz < 50 || 6 * nx * ny * nz > 200);

        std::uniform_real_distribution<double> jitter(-0.1, 0.1);
        auto id = [&](int i, int j, int k) { return (k * (ny + 1) + j) * (nx + 1) + i; };
        std::vector<Vec3> rest;
        for (int k = 0; k <= nz; ++k)
            for (int j = 0; j <= ny; ++j)
                for (int i = 0; i <= nx; ++i)
                    rest.emplace_back(i + jitter(rng), j + jitter(rng), k + jitter(rng));

        std::vector<Tet> tets;
        const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        for (int k = 0; k < nz; ++k)
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i)
                    for (const auto & p : perms)
                    {
                        int c[3] = {i, j, k};
                        Tet t;
                        t[0] = id(c[0], c[1], c[2]);
                        for (int s = 0; s < 3; ++s)
                        {
                            ++c[p[s]];
                            t[s + 1] = id(c[0], c[1], c[2]);
                        }
                        const std::vector<Tet> one{t};
                        if (signed_volumes(rest, one)[0] < 0.0)
                            std::swap(t[1], t[2]);
                        tets.push_back(t);
                    }
        return TetMesh(rest, tets);
    }

    Outcome criterion_1()
    {
        const auto t0 = std::chrono::steady_clock::now();
        std::mt19937_64 rng(101);
        double worst = 0.0;
        std::size_t inverted_meshes = 0;
        for (int trial = 0; trial < 20; ++trial)
        {
            const TetMesh mesh = random_block_mesh(rng);
            const LaplacianOperator lap = build_laplacian(mesh.tets());
            // Random deformation: affine part plus per-vertex noise large enough
            // to invert some tets.
            std::normal_distribution<double> n(0.0, 0.3);
            const Mat3 a = Mat3::Identity() + 0.3 * random_rotation(rng);
            Eigen::VectorXd x(3 * mesh.num_vertices());
            Vec3 lo = Vec3::Constant(1e300), hi = Vec3::Constant(-1e300);
            for (std::size_t v = 0; v < mesh.num_vertices(); ++v)
            {
                const Vec3 p = a * mesh.rest_vertices()[v] + Vec3(n(rng), n(rng), n(rng));
                x.segment<3>(3 * v) = p;
                lo = lo.cwiseMin(p);
                hi = hi.cwiseMax(p);
            }
            const double h = 1e-5 * (hi - lo).norm();
            const double w1 = 5e-6, w2 = 2e-5;
            const Eigen::VectorXd g = geometric_energy_gradient(x, mesh, lap, w1, w2);
            inverted_meshes += geometric_energy(x, mesh, lap, 0.0, 0.0).inverted > 0;

            Eigen::VectorXd fd(x.size());
            Eigen::VectorXd y = x;
            auto energy = [&](const Eigen::VectorXd & z) {
                const GeometricEnergy e = geometric_energy(z, mesh, lap, 0.0, 0.0);
                return w1 * e.biharmonic + w2 * e.penalty;
            };
            for (Eigen::Index i = 0; i < x.size(); ++i)
            {
                y[i] = x[i] + h;
                const double plus = energy(y);
                y[i] = x[i] - h;
                const double minus = energy(y);
                y[i] = x[i];
                fd[i] = (plus - minus) / (2.0 * h);
            }
            worst = std::max(worst, relative_error(g, fd));
        }
        const double sec = seconds_since(t0);
        return {worst < 1e-4 && sec < 30.0,
                fmt("max relative error %.2e over 20 meshes of 50-200 tets (%zu with inverted tets), %.2f s", worst,
                    inverted_meshes, sec)};
    }

    // ------------------------------------------------------------------ 2

    Outcome criterion_2()
    {
        const auto t0 = std::chrono::steady_clock::now();
        std::mt19937_64 rng(202);
        std::normal_distribution<double> n(0.0, 0.04);
        double worst = 0.0;
        int trials = 0;
        for (int size : {16, 24, 32})
            for (int variant = 0; variant < 2; ++variant)
            {
                // Icosahedron (20 faces) against an independently perturbed target.
                const SurfaceMesh base = make_icosphere(Vec3::Zero(), 0.6, 0);
                SurfaceMesh target = base, mesh = base;
                for (Vec3 & v : target.vertices)
                    v += Vec3(n(rng), n(rng), n(rng));
                for (Vec3 & v : mesh.vertices)
                    v += Vec3(n(rng), n(rng), n(rng));
                RenderConfig config;
                config.sigma = variant == 0 ? 0.5 : 2.0;
                std::vector<View> views;
                for (const Camera & cam : fibonacci_cameras(2, 2.5, 50.0, size, size))
                    views.push_back(render_target_view(target, cam, config));
                const LossWeights w{1.0, 0.5, 0.25};

                const RenderLoss loss = render_loss_and_grad(mesh, views, config, w);
                Eigen::VectorXd fd(loss.gradient.size());
                const double h = 1e-6;
                for (std::size_t v = 0; v < mesh.num_vertices(); ++v)
                    for (int c = 0; c < 3; ++c)
                    {
                        const double keep = mesh.vertices[v][c];
                        mesh.vertices[v][c] = keep + h;
                        const double plus = render_loss_and_grad(mesh, views, config, w).total;
                        mesh.vertices[v][c] = keep - h;
                        const double minus = render_loss_and_grad(mesh, views, config, w).total;
                        mesh.vertices[v][c] = keep;
                        fd[3 * v + c] = (plus - minus) / (2.0 * h);
                    }
                worst = std::max(worst, relative_error(loss.gradient, fd));
                ++trials;
            }
        const double sec = seconds_since(t0);
        return {worst < 1e-3 && sec < 60.0,
                fmt("max relative error %.2e over %d cases (20 faces, 16-32 px, silhouette+depth+normal), %.2f s",
                    worst, trials, sec)};
    }

    // ------------------------------------------------------------------ 3

    Outcome criterion_3()
    {
        const TetMesh mesh = generate_unit_tetsphere(3);
        const LaplacianOperator lap = build_laplacian(mesh.tets());
        std::mt19937_64 rng(303);
        std::normal_distribution<double> n;
        double worst_bh = 0.0, worst_pen = 0.0;
        for (int trial = 0; trial < 100; ++trial)
        {
            Mat3 a;
            do
                for (int i = 0; i < 9; ++i)
                    a(i / 3, i % 3) = n(rng);
            while (!(a.determinant() > 0.0));
            const Vec3 t(n(rng), n(rng), n(rng));
            Eigen::VectorXd x(3 * mesh.num_vertices());
            for (std::size_t v = 0; v < mesh.num_vertices(); ++v)
                x.segment<3>(3 * v) = a * mesh.rest_vertices()[v] + t;
            const GeometricEnergy e = geometric_energy(x, mesh, lap, 0.0, 0.0);
            worst_bh = std::max(worst_bh, e.biharmonic);
            worst_pen = std::max(worst_pen, e.penalty);
        }
        return {worst_bh < 1e-10 && worst_pen == 0.0,
                fmt("100 maps: max biharmonic %.2e, max penalty %g", worst_bh, worst_pen)};
    }

    // ------------------------------------------------- shared run helpers

    struct TopologySnapshot
    {
        std::vector<Tet> tets;
        std::vector<Tri> faces;
        std::vector<int> vertex_ids;
        std::size_t spheres = 0;

        explicit TopologySnapshot(const TetSphereSet & set)
        {
            tets = set.tets();
            const UnionTopology u = union_topology(set);
            faces = u.faces;
            vertex_ids = u.vertex_ids;
            spheres = set.size();
        }

        template <typename T>
        static bool same_bytes(const std::vector<T> & a, const std::vector<T> & b)
        {
            return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(T)) == 0;
        }

        bool identical(const TopologySnapshot & o) const
        {
            return spheres == o.spheres && same_bytes(tets, o.tets) && same_bytes(faces, o.faces) &&
                   same_bytes(vertex_ids, o.vertex_ids);
        }
    };

    // Topology checks gathered from every reconstruction run (criterion 9).
    struct TopologyLedger
    {
        int runs = 0;
        int identical = 0;
        void record(bool same)
        {
            ++runs;
            identical += same;
        }
    } topology_ledger;

    std::vector<Vec3> analytic_sphere_samples(double radius, std::size_t count, std::uint64_t seed)
    {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> n;
        std::vector<Vec3> p(count);
        for (Vec3 & q : p)
            q = radius * Vec3(n(rng), n(rng), n(rng)).normalized();
        return p;
    }

    // ------------------------------------------------------------------ 4

    struct ShrinkRun
    {
        std::size_t inverted = 0;
        std::size_t peak_inverted = 0;
        double chamfer = 0.0;
        double seconds = 0.0;
    };

    ShrinkRun shrink_run(double w1, double w2)
    {
        const auto t0 = std::chrono::steady_clock::now();
        const SurfaceMesh target = make_icosphere(Vec3::Zero(), 0.5, 5);
        std::vector<View> views;
        for (const Camera & cam : fibonacci_cameras(16, 3.0, 45.0, 128, 128))
            views.push_back(render_target_view(target, cam));

        InitResult init;
        init.centers = {Vec3::Zero()};
        init.radii = {1.0};
        TetSphereSet set = spheres_from_init(init, 4);
        const TopologySnapshot before(set);

        ReconstructionConfig config;
        config.iterations = 1000;
        config.learning_rate = 2e-3;
        config.w1 = w1;
        config.w2 = w2;
        config.scheduler = true;
        config.render_weights = {1.0 / 16.0, 1.0 / 16.0, 0.0};
        ShrinkRun out;
        const ReconstructionReport report =
            reconstruct(set, views, config, [&](const IterationRecord & r, const Eigen::VectorXd &) {
                out.peak_inverted = std::max(out.peak_inverted, r.inverted);
            });
        topology_ledger.record(TopologySnapshot(set).identical(before));

        out.inverted = report.final_inverted;
        const SurfaceSamples s = sample_surface_points(union_surfaces(set), 100000, 1);
        out.chamfer = chamfer(s.points, analytic_sphere_samples(0.5, 100000, 2));
        out.seconds = seconds_since(t0);
        return out;
    }

    Outcome criterion_4()
    {
        const ShrinkRun reg = shrink_run(5e-6, 2e-5);
        const ShrinkRun bare = shrink_run(0.0, 0.0);
        const double floor = chamfer(analytic_sphere_samples(0.5, 100000, 3), analytic_sphere_samples(0.5, 100000, 2));
        const double sec = reg.seconds + bare.seconds;
        return {reg.inverted == 0 && reg.chamfer < 0.01 && bare.inverted > 0 && sec < 600.0,
                fmt("regularized: %zu inverted (peak %zu), chamfer %.4f (sampling floor %.4f); "
                    "w1=w2=0: %zu inverted; %.0f s",
                    reg.inverted, reg.peak_inverted, reg.chamfer, floor, bare.inverted, sec)};
    }

    // ------------------------------------------------------------- 5, 10

    struct TorusRun
    {
        double w1 = 0.0;
        double chamfer = 0.0;
        double biharmonic = 0.0;
        std::size_t inverted = 0;
        std::size_t spheres = 0;
        std::size_t manifold_spheres = 0;
        std::set<std::size_t> cc_counts;
        double seconds = 0.0;
    };

    struct TorusFixture
    {
        std::vector<View> views;
        InitResult init;
        SurfaceMesh gt;
        double init_seconds = 0.0;
    };

    const TorusFixture & torus_fixture()
    {
        static const TorusFixture fixture = [] {
            TorusFixture f;
            f.gt = make_torus(0.6, 0.2, 128, 64);
            std::vector<View> rendered;
            for (const Camera & cam : fibonacci_cameras(24, 3.0, 45.0, 128, 128))
                rendered.push_back(render_target_view(f.gt, cam));
            // Round-trip through files so the run sees what the command-line
            // pipeline sees (8-bit masks, PFM depth).
            const fs::path dir = fs::temp_directory_path() / "tetsplat_acceptance_torus";
            fs::remove_all(dir);
            write_dataset(dir, rendered);
            f.views = load_views(dir / "cameras.json", dir);
            const auto t0 = std::chrono::steady_clock::now();
            f.init = initialize_spheres(f.views, InitConfig{});
            f.init_seconds = seconds_since(t0);
            return f;
        }();
        return fixture;
    }

    TorusRun torus_run(double w1)
    {
        const TorusFixture & fx = torus_fixture();
        const auto t0 = std::chrono::steady_clock::now();
        TetSphereSet set = spheres_from_init(fx.init, 3);
        const TopologySnapshot before(set);
        const UnionTopology topo = union_topology(set);

        ReconstructionConfig config;
        config.iterations = 600;
        config.learning_rate = 2e-3;
        config.w1 = w1;
        config.w2 = 2e-5;
        config.render_weights = {1.0 / 24.0, 1.0 / 24.0, 0.0};

        TorusRun out;
        out.w1 = w1;
        out.cc_counts.insert(connected_components(union_surfaces(set)));
        const ReconstructionReport report =
            reconstruct(set, fx.views, config, [&](const IterationRecord & r, const Eigen::VectorXd & x) {
                if ((r.t + 1) % 100 == 0)
                    out.cc_counts.insert(connected_components(topo.surface(x)));
            });
        topology_ledger.record(TopologySnapshot(set).identical(before));

        const SurfaceMesh recon = union_surfaces(set);
        out.cc_counts.insert(connected_components(recon));
        out.chamfer = chamfer(sample_surface_points(recon, 100000, 1).points,
                              sample_surface_points(fx.gt, 100000, 2).points);
        out.biharmonic = report.final_biharmonic;
        out.inverted = report.final_inverted;
        out.spheres = set.size();
        for (const TetMesh & sphere : set.spheres())
            out.manifold_spheres += manifoldness_check(boundary_faces(sphere));
        out.seconds = seconds_since(t0);
        return out;
    }

    std::vector<TorusRun> & torus_sweep()
    {
        static std::vector<TorusRun> runs = [] {
            std::vector<TorusRun> r;
            for (double w1 : {1e-6, 5e-6, 5e-5})
                r.push_back(torus_run(w1));
            return r;
        }();
        return runs;
    }

    Outcome criterion_5()
    {
        const TorusFixture & fx = torus_fixture();
        const TorusRun & run = torus_sweep()[1]; // w1 = 5e-6
        const double floor = chamfer(sample_surface_points(fx.gt, 100000, 3).points,
                                     sample_surface_points(fx.gt, 100000, 2).points);
        const bool stable = run.cc_counts.size() == 1;
        const double sec = fx.init_seconds + run.seconds;
        return {run.chamfer < 0.03 && run.manifold_spheres == run.spheres && stable && sec < 1200.0,
                fmt("%zu spheres from init, chamfer %.4f (sampling floor %.4f), manifold %zu/%zu, "
                    "cc %s across run, %zu inverted, %.0f s",
                    run.spheres, run.chamfer, floor, run.manifold_spheres, run.spheres,
                    stable ? fmt("stable at %zu", *run.cc_counts.begin()).c_str() : "changed", run.inverted, sec)};
    }

    Outcome criterion_10()
    {
        const std::vector<TorusRun> & runs = torus_sweep();
        bool decreasing = true;
        for (std::size_t i = 1; i < runs.size(); ++i)
            decreasing = decreasing && runs[i].biharmonic < runs[i - 1].biharmonic;
        std::string detail = "final biharmonic";
        for (const TorusRun & r : runs)
            detail += fmt(" w1=%g: %.3f (chamfer %.4f, %zu inverted, %.0f s);", r.w1, r.biharmonic, r.chamfer, r.inverted,
                          r.seconds);
        detail.pop_back();
        return {decreasing, detail};
    }

    // ------------------------------------------------------------------ 6

    Outcome criterion_6()
    {
        double worst = 0.0;
        for (double n : {3.0, 30.0, 300.0, 2000.0, 3e5})
        {
            worst = std::max(worst, std::abs(cosine_weight_schedule(0.0, n) - 1.0));
            worst = std::max(worst, std::abs(cosine_weight_schedule(n, n) - 4.0));
            worst = std::max(worst, std::abs(cosine_weight_schedule(n / 3.0, n) - 2.0));
        }
        return {worst < 1e-12, fmt("max deviation %.1e at t = 0, n/3, n for five horizons", worst)};
    }

    // ------------------------------------------------------------------ 7

    Outcome criterion_7()
    {
        const auto t0 = std::chrono::steady_clock::now();
        std::mt19937_64 rng(707);
        std::uniform_int_distribution<int> size(2, 15);
        std::uniform_real_distribution<double> density(0.05, 0.5);
        int feasible = 0, within = 0;
        double worst_ratio = 0.0;
        for (int trial = 0; trial < 200; ++trial)
        {
            const int m = size(rng);
            std::bernoulli_distribution coin(density(rng));
            std::vector<std::vector<int>> d(m, std::vector<int>(m, 0));
            for (int r = 0; r < m; ++r)
                for (int c = 0; c < m; ++c)
                    d[r][c] = r == c || coin(rng);
            const CoverageProblem p = CoverageProblem::from_matrix(d);
            const std::vector<int> greedy = solve_set_cover_greedy(p);
            const std::vector<int> exact = solve_set_cover_exact(p);
            feasible += is_cover(p, greedy);
            const double ratio = static_cast<double>(greedy.size()) / static_cast<double>(exact.size());
            within += ratio <= 1.0 + std::log(static_cast<double>(m));
            worst_ratio = std::max(worst_ratio, ratio);
        }
        const double sec = seconds_since(t0);
        return {feasible == 200 && within == 200 && sec < 60.0,
                fmt("200 instances m<=15: %d feasible, %d within (1+ln m), worst greedy/exact %.3f, %.2f s", feasible,
                    within, worst_ratio, sec)};
    }

    // ------------------------------------------------------------------ 8

    Outcome criterion_8()
    {
        std::mt19937_64 rng(808);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        auto cloud = [&](std::size_t n) {
            std::vector<Vec3> p(n);
            for (Vec3 & q : p)
                q = Vec3(u(rng), u(rng), u(rng));
            return p;
        };
        auto brute = [](const Vec3 & q, const std::vector<Vec3> & pts) {
            double best = std::numeric_limits<double>::infinity();
            for (const Vec3 & p : pts)
                best = std::min(best, (p - q).norm());
            return best;
        };

        double chamfer_err = 0.0, f_err = 0.0;
        for (int trial = 0; trial < 10; ++trial)
        {
            const std::vector<Vec3> a = cloud(100), b = cloud(100);
            const double tau = 0.15;
            double ab = 0.0, ba = 0.0;
            int ha = 0, hb = 0;
            for (const Vec3 & p : a)
            {
                const double d = brute(p, b);
                ab += d;
                ha += d < tau;
            }
            for (const Vec3 & p : b)
            {
                const double d = brute(p, a);
                ba += d;
                hb += d < tau;
            }
            const double pr = ha / 100.0, rc = hb / 100.0;
            chamfer_err = std::max(chamfer_err, std::abs(chamfer(a, b) - 0.5 * (ab + ba) / 100.0));
            f_err = std::max(f_err, std::abs(f_score(a, b, tau) - (pr + rc > 0 ? 2 * pr * rc / (pr + rc) : 0.0)));
        }

        SurfaceMesh eq, right;
        eq.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.5, std::sqrt(3.0) / 2.0, 0)};
        eq.faces = {{0, 1, 2}};
        right.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
        right.faces = {{0, 1, 2}};
        const double alr_eq = area_length_ratio(eq);
        const double alr_right = area_length_ratio(right);

        const double iou =
            volume_iou(make_box(Vec3::Zero(), Vec3::Ones()), make_box(Vec3(0.5, 0, 0), Vec3(1.5, 1, 1)), 64).iou;

        double icp_err = 0.0;
        const std::vector<Vec3> target =
            sample_surface_points(make_box(Vec3(-0.5, -0.3, -0.2), Vec3(0.5, 0.3, 0.2)), 3000, 9).points;
        for (int trial = 0; trial < 5; ++trial)
        {
            const Mat3 r = Eigen::AngleAxisd(0.05 + 0.05 * trial, random_rotation(rng).col(0)).toRotationMatrix();
            const Vec3 t(0.1 * u(rng), 0.1 * u(rng), 0.1 * u(rng));
            std::vector<Vec3> source;
            for (const Vec3 & p : target)
                source.push_back(r * p + t);
            const IcpResult res = icp_align(source, target);
            icp_err = std::max(icp_err, (res.transform.rotation - r.transpose()).cwiseAbs().maxCoeff());
            icp_err = std::max(icp_err, (res.transform.translation + r.transpose() * t).cwiseAbs().maxCoeff());
        }

        const bool pass = chamfer_err < 1e-12 && f_err < 1e-12 && std::abs(alr_eq - 1.0) < 1e-12 &&
                          std::abs(alr_right - 0.7174) < 1e-3 && std::abs(iou - 1.0 / 3.0) < 0.02 && icp_err < 1e-4;
        return {pass, fmt("chamfer err %.1e, f-score err %.1e, ALR %.15f / %.4f, shifted-cube IoU %.4f, "
                          "ICP err %.1e",
                          chamfer_err, f_err, alr_eq, alr_right, iou, icp_err)};
    }

    // ------------------------------------------------------------------ 9

    Outcome criterion_9()
    {
        if (topology_ledger.runs == 0)
        {
            // Run standalone: use a short reconstruction of its own.
            InitResult init;
            init.centers = {Vec3(-0.3, 0, 0), Vec3(0.3, 0, 0)};
            init.radii = {0.3, 0.3};
            TetSphereSet set = spheres_from_init(init, 2);
            const TopologySnapshot before(set);
            std::vector<View> views;
            for (const Camera & cam : fibonacci_cameras(4, 3.0, 45.0, 32, 32))
                views.push_back(render_target_view(make_icosphere(Vec3::Zero(), 0.5, 3), cam));
            ReconstructionConfig config;
            config.iterations = 20;
            reconstruct(set, views, config);
            topology_ledger.record(TopologySnapshot(set).identical(before));
        }
        return {topology_ledger.identical == topology_ledger.runs,
                fmt("%d/%d reconstruction runs byte-identical in tets, boundary faces and M", topology_ledger.identical,
                    topology_ledger.runs)};
    }
}

int main(int argc, char ** argv)
{
    const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
        {1, criterion_1}, {2, criterion_2}, {3, criterion_3}, {4, criterion_4},  {5, criterion_5},
        {6, criterion_6}, {7, criterion_7}, {8, criterion_8}, {10, criterion_10}, {9, criterion_9},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.insert(std::atoi(argv[i]));

    std::vector<std::pair<int, Outcome>> results;
    for (const auto & [id, run] : criteria)
    {
        if (!selected.empty() && !selected.count(id))
            continue;
        Outcome o;
        try
        {
            o = run();
        }
        catch (const std::exception & e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %2d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
        results.emplace_back(id, o);
    }
    int failed = 0;
    for (const auto & r : results)
        failed += !r.second.pass;
    std::printf("%zu criteria, %d failed\n", results.size(), failed);
    return failed == 0 ? 0 : 1;
}
