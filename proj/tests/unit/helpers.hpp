#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "tetsplat/tet_mesh.hpp"

namespace tetsplat::test
{
    /// Fresh empty directory under the system temp dir.
    inline std::filesystem::path scratch_dir(const std::string & name)
    {
        const auto dir = std::filesystem::temp_directory_path() / ("tetsplat_test_" + name);
        std::filesystem::remove_all(dir);
        std::filesystem::create_directories(dir);
        return dir;
    }

    /// Unit tet (0,0,0), (1,0,0), (0,1,0), (0,0,1) with positive orientation.
    inline std::vector<Vec3> unit_tet_vertices()
    {
        return {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
    }

    /// Rest template with every vertex jittered by up to `amount`.
    inline Eigen::VectorXd perturbed(const Eigen::VectorXd & x, double amount, std::uint64_t seed)
    {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-amount, amount);
        Eigen::VectorXd y = x;
        for (Eigen::Index i = 0; i < y.size(); ++i)
            y[i] += u(rng);
        return y;
    }

    inline double relative_error(const Eigen::VectorXd & a, const Eigen::VectorXd & b)
    {
        return (a - b).norm() / std::max(b.norm(), 1e-12);
    }
}
