// tetsplat: command-line front end for initialization, reconstruction,
// rendering, metrics and format conversion.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or input error.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tetsplat/deformation.hpp"
#include "tetsplat/init.hpp"
#include "tetsplat/mesh_io.hpp"
#include "tetsplat/metrics.hpp"
#include "tetsplat/optimizer.hpp"
#include "tetsplat/parallel.hpp"
#include "tetsplat/renderer.hpp"
#include "tetsplat/synthetic.hpp"
#include "tetsplat/view_io.hpp"

namespace fs = std::filesystem;
using namespace tetsplat;

namespace
{
    // Malformed command line or unusable input; maps to exit code 2.
    struct UsageError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    std::string timestamp()
    {
        const std::time_t now = std::time(nullptr);
        char buf[32];
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        return buf;
    }

    double seconds_since(std::chrono::steady_clock::time_point t0)
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    void write_text(const fs::path & path, const std::string & text)
    {
        std::ofstream out(path);
        if (!out)
            throw IoError("cannot open '" + path.string() + "' for writing");
        out << text;
    }

    std::string sphere_file(std::size_t k)
    {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "sphere_%03zu.tet", k);
        return buf;
    }

    void save_spheres(const TetSphereSet & set, const fs::path & dir)
    {
        fs::create_directories(dir);
        for (std::size_t k = 0; k < set.size(); ++k)
            save_tet(set.sphere(k), dir / sphere_file(k));
    }

    // ---------------------------------------------------------------- init

    struct InitArgs
    {
        std::string views;
        std::string cameras;
        std::string output = "init.json";
        InitConfig config;
        std::vector<double> bounds;
    };

    int run_init(const InitArgs & a)
    {
        const auto t0 = std::chrono::steady_clock::now();
        const fs::path cameras = a.cameras.empty() ? fs::path(a.views) / "cameras.json" : fs::path(a.cameras);
        InitConfig config = a.config;
        if (!a.bounds.empty())
        {
            config.bounds.min = Vec3(a.bounds[0], a.bounds[1], a.bounds[2]);
            config.bounds.max = Vec3(a.bounds[3], a.bounds[4], a.bounds[5]);
        }
        const std::vector<View> views = load_views(cameras, a.views);
        const InitResult result = initialize_spheres(views, config);
        write_init_file(result, config, a.output);
        std::cout << "candidates: " << result.candidate_count << '\n'
                  << "selected: " << result.centers.size() << '\n'
                  << "wall time: " << seconds_since(t0) << " s\n";
        return 0;
    }

    // ---------------------------------------------------------- reconstruct

    struct ReconstructArgs
    {
        std::string config;
        int iterations = 0;
        std::string output;
    };

    int run_reconstruct(const ReconstructArgs & a)
    {
        JobConfig job = read_config_file(a.config);
        if (a.iterations > 0)
            job.config.iterations = a.iterations;
        if (!a.output.empty())
            job.paths.output = a.output;
        if (job.paths.init.empty() || job.paths.cameras.empty() || job.paths.output.empty())
            throw UsageError("config must set init, cameras and output");

        const fs::path out = job.paths.output;
        fs::create_directories(out);

        // The manifest and resolved config go out before any heavy lifting.
        std::ostringstream resolved;
        write_config(job, resolved);
        write_text(out / "config.resolved", resolved.str());
        nlohmann::json manifest;
        manifest["command"] = "reconstruct";
        manifest["config_path"] = fs::absolute(a.config).string();
        manifest["resolved_config"] = "config.resolved";
        manifest["rerun"] = "tetsplat reconstruct config.resolved";
        manifest["views"] = job.paths.views.empty() ? "" : fs::absolute(job.paths.views).string();
        manifest["cameras"] = fs::absolute(job.paths.cameras).string();
        manifest["init"] = fs::absolute(job.paths.init).string();
        manifest["output"] = fs::absolute(out).string();
        manifest["seed"] = job.config.seed;
        manifest["started_at"] = timestamp();
        manifest["versions"] = {{"tetsplat", kVersion},  {"tet_mesh", kVersion},  {"deformation", kVersion},
                                {"renderer", kVersion},  {"init", kVersion},      {"optimizer", kVersion},
                                {"metrics", kVersion}};
        manifest["threads"] = thread_count();
        write_text(out / "manifest.json", manifest.dump(2) + "\n");

        const std::vector<View> views = load_views(job.paths.cameras, job.paths.views);
        const InitResult init = read_init_file(job.paths.init);
        TetSphereSet set = spheres_from_init(init, job.config.template_resolution);
        std::cout << "spheres: " << set.size() << ", tets: " << set.total_tets()
                  << ", vertices: " << set.total_vertices() << ", views: " << views.size() << '\n';

        const auto t0 = std::chrono::steady_clock::now();
        const int every = job.config.checkpoint_every;
        const ReconstructionReport report =
            reconstruct(set, views, job.config, [&](const IterationRecord & r, const Eigen::VectorXd & x) {
                if (every > 0 && (r.t + 1) % every == 0)
                {
                    TetSphereSet snapshot = set;
                    snapshot.set_positions(x);
                    char dir[32];
                    std::snprintf(dir, sizeof(dir), "iter_%06d", r.t + 1);
                    save_spheres(snapshot, out / "checkpoints" / dir);
                }
            });

        write_log_csv(report.log, out / "log.csv");
        save_obj(union_surfaces(set), out / "final.obj");
        save_spheres(set, out / "spheres");

        manifest["finished_at"] = timestamp();
        manifest["wall_seconds"] = seconds_since(t0);
        manifest["final"] = {{"phi", report.final_phi},
                             {"biharmonic", report.final_biharmonic},
                             {"penalty", report.final_penalty},
                             {"inverted", report.final_inverted}};
        write_text(out / "manifest.json", manifest.dump(2) + "\n");

        std::cout << "initial phi: " << report.log.front().phi << '\n'
                  << "final phi: " << report.final_phi << '\n'
                  << "final inverted: " << report.final_inverted << '\n'
                  << "wall time: " << seconds_since(t0) << " s\n";
        return 0;
    }

    // -------------------------------------------------------------- metrics

    struct MetricsArgs
    {
        std::string recon;
        std::string gt;
        std::string output;
        MetricOptions options;
        bool no_icp = false;
    };

    std::string format_optional(const std::optional<double> & v)
    {
        if (!v)
            return "no-sharp-edges";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", *v);
        return buf;
    }

    int run_metrics(const MetricsArgs & a)
    {
        const SurfaceMesh recon = load_obj(a.recon);
        const SurfaceMesh gt = load_obj(a.gt);
        MetricOptions options = a.options;
        options.icp = !a.no_icp;
        const MetricReport r = evaluate(recon, gt, options);
        if (!a.output.empty())
            write_text(a.output, r.to_json() + "\n");
        std::printf("%-10s %-9s %-7s %-4s %-8s %-8s %-14s %-14s %-14s\n", "Cham.", "Vol.IoU", "ALR", "MR",
                    "CC Diff.", "F-Score", "Normal Consis.", "Edge Cham.", "Edge F-Score");
        std::printf("%-10.6f %-9.4f %-7.4f %-4s %-8zu %-8.4f %-14.4f %-14s %-14s\n", r.chamfer, r.vol_iou, r.alr,
                    r.manifold ? "yes" : "no", r.cc_diff, r.f_score, r.normal_consistency,
                    format_optional(r.edge_chamfer).c_str(), format_optional(r.edge_f_score).c_str());
        for (const std::string & w : r.warnings)
            std::cerr << "warning: " << w << '\n';
        return 0;
    }

    // --------------------------------------------------------------- render

    struct RenderArgs
    {
        std::string mesh;
        std::string cameras;
        std::string mode = "mask";
        std::string output = "render";
        double sigma = 0.1;
    };

    SurfaceMesh load_surface(const fs::path & path)
    {
        if (path.extension() == ".tet")
        {
            const TetFile f = load_tet(path);
            const TetMesh mesh(f.vertices, f.tets);
            return boundary_faces(mesh);
        }
        return load_obj(path);
    }

    int run_render(const RenderArgs & a)
    {
        const SurfaceMesh mesh = load_surface(a.mesh);
        const std::vector<CameraEntry> cams = read_camera_file(a.cameras);
        RenderConfig config;
        config.sigma = a.sigma;
        fs::create_directories(a.output);
        for (std::size_t i = 0; i < cams.size(); ++i)
        {
            char name[32];
            const Camera & cam = cams[i].camera;
            if (a.mode == "mask")
            {
                std::snprintf(name, sizeof(name), "mask_%03zu.png", i);
                write_png_gray(render_silhouette_soft(mesh, cam, config), fs::path(a.output) / name);
            }
            else if (a.mode == "depth")
            {
                std::snprintf(name, sizeof(name), "depth_%03zu.png", i);
                write_depth_png(render_depth(mesh, cam, config), config.background_depth, fs::path(a.output) / name);
            }
            else
            {
                Image n = render_normal(mesh, cam, config);
                for (std::size_t p = 0; p < n.pixel_count(); ++p)
                {
                    const bool fg = n.data[3 * p] != 0.0 || n.data[3 * p + 1] != 0.0 || n.data[3 * p + 2] != 0.0;
                    for (int c = 0; c < 3; ++c)
                        n.data[3 * p + c] = fg ? 0.5 * (n.data[3 * p + c] + 1.0) : 0.0;
                }
                std::snprintf(name, sizeof(name), "normal_%03zu.png", i);
                write_png_rgb(n, fs::path(a.output) / name);
            }
        }
        std::cout << "rendered " << cams.size() << " " << a.mode << " images to " << a.output << '\n';
        return 0;
    }

    // -------------------------------------------------------------- convert

    int run_convert(const std::string & in, const std::string & out)
    {
        const fs::path dst(out);
        if (dst.extension() == ".obj")
            save_obj(load_surface(in), dst);
        else if (dst.extension() == ".tet" && fs::path(in).extension() == ".tet")
        {
            const TetFile f = load_tet(in);
            save_tet(f.vertices, f.tets, dst);
        }
        else
            throw UsageError("unsupported conversion '" + in + "' -> '" + out + "' (targets: .obj, .tet from .tet)");
        std::cout << "wrote " << out << '\n';
        return 0;
    }

    // ---------------------------------------------------------------- synth

    struct SynthArgs
    {
        std::string shape = "sphere";
        std::string output = "dataset";
        int views = 16;
        int size = 128;
        double distance = 3.0;
        double fov = 45.0;
        double radius = 0.5;
        double major = 0.6;
        double minor = 0.2;
    };

    int run_synth(const SynthArgs & a)
    {
        const SurfaceMesh gt =
            a.shape == "torus" ? make_torus(a.major, a.minor, 128, 64) : make_icosphere(Vec3::Zero(), a.radius, 5);
        std::vector<View> views;
        for (const Camera & cam : fibonacci_cameras(a.views, a.distance, a.fov, a.size, a.size))
            views.push_back(render_target_view(gt, cam));
        write_dataset(a.output, views);
        save_obj(gt, fs::path(a.output) / "gt.obj");
        std::cout << "wrote " << views.size() << " views of a " << a.shape << " to " << a.output << '\n';
        return 0;
    }
}

int main(int argc, char ** argv)
{
    CLI::App app{"tetsplat: multi-view shape reconstruction with deformable tetrahedral spheres"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads for per-view rendering (0: runtime default)")
        ->check(CLI::NonNegativeNumber);
    app.set_version_flag("--version", kVersion);

    InitArgs init_args;
    auto * init = app.add_subcommand("init", "select sphere centers and radii from silhouettes");
    init->add_option("--views", init_args.views, "directory holding the view images")->required();
    init->add_option("--cameras", init_args.cameras, "camera JSON (default: <views>/cameras.json)");
    init->add_option("--grid", init_args.config.grid_resolution, "voxels along the longest scene axis")
        ->check(CLI::PositiveNumber);
    init->add_option("--alpha", init_args.config.alpha, "radius scale on the distance value");
    init->add_option("--beta", init_args.config.beta, "radius offset in scene units")->check(CLI::PositiveNumber);
    init->add_option("--bounds", init_args.bounds, "scene box: xmin ymin zmin xmax ymax zmax")->expected(6);
    init->add_option("-o,--output", init_args.output, "initialization JSON to write");

    ReconstructArgs rec_args;
    auto * rec = app.add_subcommand("reconstruct", "deform the initial spheres to match the views");
    rec->add_option("config", rec_args.config, "job config file (key = value)")->required();
    rec->add_option("--iterations", rec_args.iterations, "override the iteration count")->check(CLI::PositiveNumber);
    rec->add_option("-o,--output", rec_args.output, "override the output directory");

    MetricsArgs met_args;
    auto * met = app.add_subcommand("metrics", "compare a reconstruction against ground truth");
    met->add_option("recon", met_args.recon, "reconstructed mesh (OBJ)")->required();
    met->add_option("gt", met_args.gt, "ground-truth mesh (OBJ)")->required();
    met->add_option("--samples", met_args.options.samples, "surface samples per mesh");
    met->add_option("--seed", met_args.options.seed, "sampling seed");
    met->add_option("--tau", met_args.options.tau, "F-score threshold (default: 1% of gt bbox diagonal)");
    met->add_option("--dihedral", met_args.options.dihedral_degrees, "sharp-edge threshold in degrees");
    met->add_option("--iou-resolution", met_args.options.iou_resolution, "voxels per axis for volume IoU")
        ->check(CLI::PositiveNumber);
    met->add_flag("--no-icp", met_args.no_icp, "skip rigid pre-alignment");
    met->add_option("-o,--output", met_args.output, "JSON report to write");

    RenderArgs ren_args;
    auto * ren = app.add_subcommand("render", "render preview images of a mesh");
    ren->add_option("mesh", ren_args.mesh, "mesh (.obj, or .tet for its boundary)")->required();
    ren->add_option("--cameras", ren_args.cameras, "camera JSON")->required();
    ren->add_option("--mode", ren_args.mode, "mask (soft silhouette), depth (16-bit PNG, mm, 0 = background) or normal")
        ->check(CLI::IsMember({"mask", "depth", "normal"}));
    ren->add_option("--sigma", ren_args.sigma, "silhouette sharpness")->check(CLI::PositiveNumber);
    ren->add_option("-o,--output", ren_args.output, "output directory");

    std::string conv_in, conv_out;
    auto * conv = app.add_subcommand("convert", "convert .tet to .obj (boundary) or re-save a file");
    conv->add_option("input", conv_in, "input .obj or .tet")->required();
    conv->add_option("output", conv_out, "output .obj or .tet")->required();

    SynthArgs syn_args;
    auto * syn = app.add_subcommand("synth", "write a synthetic dataset (masks, depth, normals, cameras, gt.obj)");
    syn->add_option("--shape", syn_args.shape, "sphere or torus")->check(CLI::IsMember({"sphere", "torus"}));
    syn->add_option("--views", syn_args.views, "camera count")->check(CLI::PositiveNumber);
    syn->add_option("--size", syn_args.size, "image width and height")->check(CLI::PositiveNumber);
    syn->add_option("--distance", syn_args.distance, "camera distance from the origin");
    syn->add_option("--fov", syn_args.fov, "vertical field of view in degrees");
    syn->add_option("--radius", syn_args.radius, "sphere radius");
    syn->add_option("--major", syn_args.major, "torus major radius");
    syn->add_option("--minor", syn_args.minor, "torus minor radius");
    syn->add_option("-o,--output", syn_args.output, "output directory");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp & e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion & e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError & e)
    {
        app.exit(e);
        return 2;
    }

    set_thread_count(threads);
    try
    {
        if (*init)
            return run_init(init_args);
        if (*rec)
            return run_reconstruct(rec_args);
        if (*met)
            return run_metrics(met_args);
        if (*ren)
            return run_render(ren_args);
        if (*conv)
            return run_convert(conv_in, conv_out);
        if (*syn)
            return run_synth(syn_args);
    }
    catch (const UsageError & e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const IoError & e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const ParseError & e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::invalid_argument & e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception & e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
