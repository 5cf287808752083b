#include "tetsplat/optimizer.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "tetsplat/deformation.hpp"

namespace tetsplat
{
    void ReconstructionConfig::validate() const
    {
        auto fail = [](const std::string & what) { throw std::invalid_argument("ReconstructionConfig: " + what); };
        if (iterations < 1)
            fail("iterations must be at least 1");
        if (!(learning_rate > 0.0))
            fail("learning_rate must be positive");
        if (!(w1 >= 0.0) || !(w2 >= 0.0))
            fail("w1 and w2 must be non-negative");
        if (!(render_weights.silhouette >= 0.0) || !(render_weights.depth >= 0.0) || !(render_weights.normal >= 0.0))
            fail("render weights must be non-negative");
        if (!(sigma > 0.0))
            fail("sigma must be positive");
        if (sigma_halvings < 0)
            fail("sigma_halvings must be non-negative");
        if (template_resolution < 1)
            fail("template_resolution must be at least 1");
        if (checkpoint_every < 0)
            fail("checkpoint_every must be non-negative");
    }

    double cosine_weight_schedule(double t, double n)
    {
        if (!(n > 0.0))
            throw std::invalid_argument("cosine_weight_schedule: horizon must be positive");
        if (t < 0.0)
            throw std::invalid_argument("cosine_weight_schedule: t must be non-negative");
        if (t > n)
        {
            std::cerr << "warning: schedule step " << t << " beyond horizon " << n << ", clamped\n";
            t = n;
        }
        return std::pow(4.0, std::sin(t * M_PI / (2.0 * n)));
    }

    double sigma_at(const ReconstructionConfig & config, int t)
    {
        const int stages = config.sigma_halvings + 1;
        const int stage = std::min(config.sigma_halvings,
                                   static_cast<int>(static_cast<long>(t) * stages / config.iterations));
        return std::ldexp(config.sigma, -stage);
    }

    void adam_step(OptimState & state, const Eigen::VectorXd & gradient, const AdamParams & params)
    {
        if (gradient.size() != state.x.size())
            throw std::invalid_argument("adam_step: gradient size does not match state");
        if (!gradient.allFinite())
            throw std::runtime_error("non-finite gradient at iteration " + std::to_string(state.t));
        ++state.t;
        state.m = params.beta1 * state.m + (1.0 - params.beta1) * gradient;
        state.v = params.beta2 * state.v + (1.0 - params.beta2) * gradient.cwiseAbs2();
        const double c1 = 1.0 - std::pow(params.beta1, static_cast<double>(state.t));
        const double c2 = 1.0 - std::pow(params.beta2, static_cast<double>(state.t));
        state.x.array() -= params.learning_rate * (state.m.array() / c1) /
                           ((state.v.array() / c2).sqrt() + params.epsilon);
    }

    ReconstructionReport reconstruct(TetSphereSet & set, std::span<const View> views,
                                     const ReconstructionConfig & config, const IterationCallback & callback)
    {
        config.validate();
        if (views.empty())
            throw std::invalid_argument("reconstruct: at least one view is required");

        const LaplacianOperator laplacian = build_laplacian(set);
        const UnionTopology topology = union_topology(set);
        const AdamParams adam{config.learning_rate};
        OptimState state(set.positions());
        ReconstructionReport report;
        report.log.reserve(config.iterations);

        RenderConfig render;
        for (int t = 0; t < config.iterations; ++t)
        {
            IterationRecord rec;
            rec.t = t;
            rec.eta = config.scheduler ? cosine_weight_schedule(t, config.iterations) : 1.0;
            rec.sigma = render.sigma = sigma_at(config, t);

            const RenderLoss loss = render_loss_and_grad(topology, state.x, views, render, config.render_weights);
            if (!std::isfinite(loss.total))
                throw std::runtime_error("non-finite rendering loss at iteration " + std::to_string(t));
            const GeometricEnergy geo =
                geometric_energy(state.x, set, laplacian, rec.eta * config.w1, rec.eta * config.w2);

            rec.phi = loss.total;
            rec.silhouette = loss.silhouette;
            rec.depth = loss.depth;
            rec.normal = loss.normal;
            rec.biharmonic = geo.biharmonic;
            rec.penalty = geo.penalty;
            rec.inverted = geo.inverted;
            report.log.push_back(rec);

            adam_step(state, loss.gradient + geo.gradient, adam);
            if (callback)
                callback(rec, state.x);
        }

        set.set_positions(state.x);
        render.sigma = sigma_at(config, config.iterations - 1);
        report.final_phi = render_loss_and_grad(topology, state.x, views, render, config.render_weights).total;
        const GeometricEnergy geo = geometric_energy(state.x, set, laplacian, 0.0, 0.0);
        report.final_biharmonic = geo.biharmonic;
        report.final_penalty = geo.penalty;
        report.final_inverted = geo.inverted;
        return report;
    }

    TetSphereSet spheres_from_init(const InitResult & init, int template_resolution)
    {
        return instantiate_spheres(generate_unit_tetsphere(template_resolution), init.centers, init.radii);
    }

    namespace
    {
        std::string trim(const std::string & s)
        {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        }

        template <typename T>
        T parse_number(const std::string & value, std::size_t line, const std::string & key)
        {
            std::istringstream in(value);
            T out{};
            if (!(in >> out) || !(in >> std::ws).eof())
                throw ParseError(line, "line " + std::to_string(line) + ": bad value '" + value + "' for " + key);
            return out;
        }

        bool parse_bool(const std::string & value, std::size_t line, const std::string & key)
        {
            if (value == "true" || value == "1" || value == "on")
                return true;
            if (value == "false" || value == "0" || value == "off")
                return false;
            throw ParseError(line, "line " + std::to_string(line) + ": bad boolean '" + value + "' for " + key);
        }
    }

    JobConfig parse_config(std::istream & in, const std::filesystem::path & base_dir)
    {
        JobConfig job;
        ReconstructionConfig & c = job.config;
        auto path_of = [&](const std::string & v) {
            const std::filesystem::path p(v);
            return p.is_absolute() ? p : base_dir / p;
        };
        std::string text;
        std::size_t line = 0;
        while (std::getline(in, text))
        {
            ++line;
            const std::string body = trim(text.substr(0, text.find('#')));
            if (body.empty())
                continue;
            const auto eq = body.find('=');
            if (eq == std::string::npos)
                throw ParseError(line, "line " + std::to_string(line) + ": expected 'key = value'");
            const std::string key = trim(body.substr(0, eq));
            const std::string value = trim(body.substr(eq + 1));
            if (key == "iterations")
                c.iterations = parse_number<int>(value, line, key);
            else if (key == "learning_rate")
                c.learning_rate = parse_number<double>(value, line, key);
            else if (key == "w1")
                c.w1 = parse_number<double>(value, line, key);
            else if (key == "w2")
                c.w2 = parse_number<double>(value, line, key);
            else if (key == "scheduler")
                c.scheduler = parse_bool(value, line, key);
            else if (key == "weight_silhouette")
                c.render_weights.silhouette = parse_number<double>(value, line, key);
            else if (key == "weight_depth")
                c.render_weights.depth = parse_number<double>(value, line, key);
            else if (key == "weight_normal")
                c.render_weights.normal = parse_number<double>(value, line, key);
            else if (key == "sigma")
                c.sigma = parse_number<double>(value, line, key);
            else if (key == "sigma_halvings")
                c.sigma_halvings = parse_number<int>(value, line, key);
            else if (key == "template_resolution")
                c.template_resolution = parse_number<int>(value, line, key);
            else if (key == "seed")
                c.seed = parse_number<std::uint64_t>(value, line, key);
            else if (key == "checkpoint_every")
                c.checkpoint_every = parse_number<int>(value, line, key);
            else if (key == "init")
                job.paths.init = path_of(value);
            else if (key == "cameras")
                job.paths.cameras = path_of(value);
            else if (key == "views")
                job.paths.views = path_of(value);
            else if (key == "output")
                job.paths.output = path_of(value);
            else
                throw ParseError(line, "line " + std::to_string(line) + ": unknown key '" + key + "'");
        }
        try
        {
            c.validate();
        }
        catch (const std::invalid_argument & e)
        {
            throw ParseError(0, e.what());
        }
        return job;
    }

    JobConfig read_config_file(const std::filesystem::path & path)
    {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot open config file '" + path.string() + "'");
        return parse_config(in, path.parent_path());
    }

    void write_config(const JobConfig & job, std::ostream & out)
    {
        const ReconstructionConfig & c = job.config;
        out << std::setprecision(17);
        out << "iterations = " << c.iterations << '\n'
            << "learning_rate = " << c.learning_rate << '\n'
            << "w1 = " << c.w1 << '\n'
            << "w2 = " << c.w2 << '\n'
            << "scheduler = " << (c.scheduler ? "true" : "false") << '\n'
            << "weight_silhouette = " << c.render_weights.silhouette << '\n'
            << "weight_depth = " << c.render_weights.depth << '\n'
            << "weight_normal = " << c.render_weights.normal << '\n'
            << "sigma = " << c.sigma << '\n'
            << "sigma_halvings = " << c.sigma_halvings << '\n'
            << "template_resolution = " << c.template_resolution << '\n'
            << "seed = " << c.seed << '\n'
            << "checkpoint_every = " << c.checkpoint_every << '\n';
        auto path_line = [&](const char * key, const std::filesystem::path & p) {
            if (!p.empty())
                out << key << " = " << std::filesystem::absolute(p).string() << '\n';
        };
        path_line("init", job.paths.init);
        path_line("cameras", job.paths.cameras);
        path_line("views", job.paths.views);
        path_line("output", job.paths.output);
    }

    void write_log_csv(std::span<const IterationRecord> log, const std::filesystem::path & path)
    {
        std::ofstream out(path);
        if (!out)
            throw IoError("cannot open '" + path.string() + "' for writing");
        out << "t,phi,silhouette,depth,normal,biharmonic,penalty,inverted,eta,sigma\n";
        out << std::setprecision(10);
        for (const IterationRecord & r : log)
            out << r.t << ',' << r.phi << ',' << r.silhouette << ',' << r.depth << ',' << r.normal << ','
                << r.biharmonic << ',' << r.penalty << ',' << r.inverted << ',' << r.eta << ',' << r.sigma << '\n';
    }
}
