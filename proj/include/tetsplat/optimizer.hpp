#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "init.hpp"
#include "renderer.hpp"
#include "tet_mesh.hpp"

namespace tetsplat
{
    struct ReconstructionConfig
    {
        int iterations = 2000;
        double learning_rate = 1e-3;
        double w1 = 5e-6; // bi-harmonic weight
        double w2 = 2e-5; // inversion penalty weight
        bool scheduler = true;
        LossWeights render_weights;
        double sigma = 0.1;     // initial soft-silhouette sharpness
        int sigma_halvings = 2; // sigma is halved this many times, evenly spread over the run
        int template_resolution = 3;
        std::uint64_t seed = 0;
        int checkpoint_every = 0; // 0 disables checkpoints

        /// Throws std::invalid_argument on out-of-range values.
        void validate() const;
    };

    /// eta(t) = 4^sin(t pi / 2n). t > n is clamped to n with a warning on stderr.
    double cosine_weight_schedule(double t, double n);

    /// Silhouette sharpness at iteration t of n.
    double sigma_at(const ReconstructionConfig & config, int t);

    struct AdamParams
    {
        double learning_rate = 1e-3;
        double beta1 = 0.9;
        double beta2 = 0.999;
        double epsilon = 1e-8;
    };

    struct OptimState
    {
        Eigen::VectorXd x;
        Eigen::VectorXd m;
        Eigen::VectorXd v;
        long t = 0; // completed steps

        OptimState() = default;
        explicit OptimState(Eigen::VectorXd x0)
            : x(std::move(x0)), m(Eigen::VectorXd::Zero(x.size())), v(Eigen::VectorXd::Zero(x.size())) {}
    };

    /// One bias-corrected Adam update. Throws std::runtime_error naming the
    /// iteration if the gradient has non-finite entries.
    void adam_step(OptimState & state, const Eigen::VectorXd & gradient, const AdamParams & params);

    struct IterationRecord
    {
        int t = 0;
        double phi = 0.0; // rendering loss
        double silhouette = 0.0;
        double depth = 0.0;
        double normal = 0.0;
        double biharmonic = 0.0; // unweighted
        double penalty = 0.0;    // unweighted
        std::size_t inverted = 0;
        double eta = 1.0;
        double sigma = 0.0;
    };

    struct ReconstructionReport
    {
        std::vector<IterationRecord> log; // one row per iteration, state before the update
        double final_phi = 0.0;
        double final_biharmonic = 0.0;
        double final_penalty = 0.0;
        std::size_t final_inverted = 0;
    };

    using IterationCallback = std::function<void(const IterationRecord &, const Eigen::VectorXd & x)>;

    /**
     * Minimises Phi(R(x)) + eta(t) (w1 ||L F_x||^2 + w2 sum min(0, det F)^2) over
     * all vertex positions with Adam, for exactly config.iterations steps.
     * set is updated in place; connectivity never changes. The callback, if any,
     * runs after each update with the record of that iteration.
     */
    ReconstructionReport reconstruct(TetSphereSet & set, std::span<const View> views,
                                     const ReconstructionConfig & config, const IterationCallback & callback = {});

    /// Template of the given resolution instanced at every init sphere.
    TetSphereSet spheres_from_init(const InitResult & init, int template_resolution);

    /// Paths a reconstruction job reads and writes; relative entries resolve against
    /// the config file's directory.
    struct JobPaths
    {
        std::filesystem::path init;
        std::filesystem::path cameras;
        std::filesystem::path views; // empty: camera file directory
        std::filesystem::path output;
    };

    struct JobConfig
    {
        ReconstructionConfig config;
        JobPaths paths;
    };

    /**
     * "key = value" lines; '#' starts a comment. Keys: iterations, learning_rate,
     * w1, w2, scheduler, weight_silhouette, weight_depth, weight_normal, sigma,
     * sigma_halvings, template_resolution, seed, checkpoint_every, init, cameras,
     * views, output. Unknown keys and bad values raise ParseError with the line.
     */
    JobConfig parse_config(std::istream & in, const std::filesystem::path & base_dir);
    JobConfig read_config_file(const std::filesystem::path & path);
    void write_config(const JobConfig & job, std::ostream & out);

    /// CSV iteration log with a header row.
    void write_log_csv(std::span<const IterationRecord> log, const std::filesystem::path & path);
}
