#include "tetsplat/init.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>

#include <json.hpp>

namespace tetsplat
{
    VoxelGrid::VoxelGrid(const Vec3 & origin_, double spacing_, std::array<int, 3> dims_)
        : origin(origin_), spacing(spacing_), dims(dims_)
    {
        if (!(spacing > 0.0) || dims[0] <= 0 || dims[1] <= 0 || dims[2] <= 0)
            throw std::invalid_argument("VoxelGrid: spacing and dims must be positive");
        const std::size_t n = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
        occupancy.assign(n, 0);
        distance.assign(n, 0.0);
    }

    std::array<int, 3> VoxelGrid::coords(std::size_t idx) const
    {
        const int i = static_cast<int>(idx % dims[0]);
        const std::size_t rest = idx / dims[0];
        return {i, static_cast<int>(rest % dims[1]), static_cast<int>(rest / dims[1])};
    }

    Vec3 VoxelGrid::center(int i, int j, int k) const
    {
        return origin + spacing * Vec3(i + 0.5, j + 0.5, k + 0.5);
    }

    Vec3 VoxelGrid::center(std::size_t idx) const
    {
        const auto c = coords(idx);
        return center(c[0], c[1], c[2]);
    }

    std::size_t VoxelGrid::occupied_count() const
    {
        return static_cast<std::size_t>(std::count_if(occupancy.begin(), occupancy.end(), [](auto o) { return o != 0; }));
    }

    VoxelGrid carve_visual_hull(std::span<const View> views, int resolution, const SceneBounds & bounds)
    {
        if (views.empty())
            throw std::invalid_argument("carve_visual_hull: no views");
        if (resolution < 1)
            throw std::invalid_argument("carve_visual_hull: resolution must be positive");
        const Vec3 extent = bounds.max - bounds.min;
        if (!(extent.minCoeff() > 0.0))
            throw std::invalid_argument("carve_visual_hull: empty scene bounds");
        const double spacing = extent.maxCoeff() / resolution;
        std::array<int, 3> dims;
        for (int a = 0; a < 3; ++a)
            dims[a] = std::max(1, static_cast<int>(std::ceil(extent[a] / spacing - 1e-9)));

        VoxelGrid grid(bounds.min, spacing, dims);
        std::fill(grid.occupancy.begin(), grid.occupancy.end(), 1);
        for (const View & view : views)
        {
            if (view.mask.empty())
                throw std::invalid_argument("carve_visual_hull: view without mask");
            const Camera & cam = view.camera;
            for (std::size_t v = 0; v < grid.size(); ++v)
            {
                if (!grid.occupancy[v])
                    continue;
                const Projection p = project(cam, grid.center(v));
                bool keep = false;
                if (p.in_front)
                {
                    const double u = std::floor(p.pixel.x()), w = std::floor(p.pixel.y());
                    if (u >= 0.0 && w >= 0.0 && u < cam.width && w < cam.height)
                        keep = view.mask.at(static_cast<int>(u), static_cast<int>(w)) > 0.5;
                }
                grid.occupancy[v] = keep ? 1 : 0;
            }
        }
        if (grid.occupied_count() == 0)
            grid.warning = "visual hull is empty";
        return grid;
    }

    namespace
    {
        // Lower envelope of parabolas; f holds squared distances, sites are f == 0.
        void edt_1d(std::vector<double> & f, std::vector<double> & out, std::vector<int> & v, std::vector<double> & z)
        {
            const int n = static_cast<int>(f.size());
            int k = 0;
            v[0] = 0;
            z[0] = -std::numeric_limits<double>::infinity();
            z[1] = std::numeric_limits<double>::infinity();
            for (int q = 1; q < n; ++q)
            {
                double s;
                while (true)
                {
                    const int p = v[k];
                    s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * q - 2.0 * p);
                    if (s > z[k] || k == 0)
                        break;
                    --k;
                }
                if (s <= z[k])
                {
                    v[0] = q;
                    z[0] = -std::numeric_limits<double>::infinity();
                    z[1] = std::numeric_limits<double>::infinity();
                    continue;
                }
                ++k;
                v[k] = q;
                z[k] = s;
                z[k + 1] = std::numeric_limits<double>::infinity();
            }
            k = 0;
            for (int q = 0; q < n; ++q)
            {
                while (z[k + 1] < q)
                    ++k;
                const double d = q - v[k];
                out[q] = d * d + f[v[k]];
            }
        }
    }

    void distance_transform(VoxelGrid & grid)
    {
        // One layer of unoccupied padding stands in for everything outside the grid.
        const std::array<int, 3> pd = {grid.dims[0] + 2, grid.dims[1] + 2, grid.dims[2] + 2};
        const double far = 1e20;
        std::vector<double> d2(static_cast<std::size_t>(pd[0]) * pd[1] * pd[2], 0.0);
        auto pidx = [&](int i, int j, int k) { return (static_cast<std::size_t>(k) * pd[1] + j) * pd[0] + i; };
        for (int k = 0; k < grid.dims[2]; ++k)
            for (int j = 0; j < grid.dims[1]; ++j)
                for (int i = 0; i < grid.dims[0]; ++i)
                    if (grid.occupancy[grid.index(i, j, k)])
                        d2[pidx(i + 1, j + 1, k + 1)] = far;

        const int longest = std::max({pd[0], pd[1], pd[2]});
        std::vector<double> f(longest), out(longest), z(longest + 1);
        std::vector<int> v(longest);
        for (int axis = 0; axis < 3; ++axis)
        {
            const int n = pd[axis];
            f.resize(n);
            out.resize(n);
            const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
            for (int s = 0; s < pd[a2]; ++s)
                for (int r = 0; r < pd[a1]; ++r)
                {
                    std::array<int, 3> c;
                    c[a1] = r;
                    c[a2] = s;
                    for (int q = 0; q < n; ++q)
                    {
                        c[axis] = q;
                        f[q] = d2[pidx(c[0], c[1], c[2])];
                    }
                    edt_1d(f, out, v, z);
                    for (int q = 0; q < n; ++q)
                    {
                        c[axis] = q;
                        d2[pidx(c[0], c[1], c[2])] = out[q];
                    }
                }
        }
        for (int k = 0; k < grid.dims[2]; ++k)
            for (int j = 0; j < grid.dims[1]; ++j)
                for (int i = 0; i < grid.dims[0]; ++i)
                {
                    const std::size_t idx = grid.index(i, j, k);
                    grid.distance[idx] =
                        grid.occupancy[idx] ? std::sqrt(d2[pidx(i + 1, j + 1, k + 1)]) * grid.spacing : 0.0;
                }
    }

    bool CoverageProblem::covers(std::size_t column, std::size_t row) const
    {
        const auto & c = columns.at(column);
        return std::binary_search(c.begin(), c.end(), static_cast<int>(row));
    }

    CoverageProblem CoverageProblem::from_matrix(const std::vector<std::vector<int>> & d)
    {
        const std::size_t m = d.size();
        CoverageProblem p;
        p.columns.resize(m);
        for (std::size_t r = 0; r < m; ++r)
        {
            if (d[r].size() != m)
                throw std::invalid_argument("coverage matrix must be square");
            for (std::size_t c = 0; c < m; ++c)
                if (d[r][c])
                    p.columns[c].push_back(static_cast<int>(r));
        }
        return p;
    }

    std::vector<std::vector<int>> CoverageProblem::dense() const
    {
        const std::size_t m = size();
        std::vector<std::vector<int>> d(m, std::vector<int>(m, 0));
        for (std::size_t c = 0; c < m; ++c)
            for (int r : columns[c])
                d[r][c] = 1;
        return d;
    }

    CoverageProblem build_coverage_problem(const VoxelGrid & grid, double alpha, double beta)
    {
        if (grid.distance.size() != grid.size())
            throw std::invalid_argument("build_coverage_problem: grid has no distance values");
        std::vector<int> candidate_of(grid.size(), -1);
        CoverageProblem p;
        for (std::size_t v = 0; v < grid.size(); ++v)
            if (grid.occupied(v))
            {
                candidate_of[v] = static_cast<int>(p.candidates.size());
                p.candidates.push_back(grid.center(v));
                p.radii.push_back(alpha * grid.distance[v] + beta);
            }
        if (p.candidates.empty())
            throw std::invalid_argument("build_coverage_problem: grid has no occupied voxels");

        p.columns.resize(p.candidates.size());
        for (std::size_t v = 0; v < grid.size(); ++v)
        {
            const int ci = candidate_of[v];
            if (ci < 0)
                continue;
            const double radius = p.radii[ci];
            const int reach = static_cast<int>(std::floor(radius / grid.spacing)) + 1;
            const auto c = grid.coords(v);
            auto & column = p.columns[ci];
            for (int k = std::max(0, c[2] - reach); k <= std::min(grid.dims[2] - 1, c[2] + reach); ++k)
                for (int j = std::max(0, c[1] - reach); j <= std::min(grid.dims[1] - 1, c[1] + reach); ++j)
                    for (int i = std::max(0, c[0] - reach); i <= std::min(grid.dims[0] - 1, c[0] + reach); ++i)
                    {
                        const int cj = candidate_of[grid.index(i, j, k)];
                        if (cj >= 0 && (p.candidates[cj] - p.candidates[ci]).norm() <= radius)
                            column.push_back(cj);
                    }
        }
        return p;
    }

    bool is_cover(const CoverageProblem & problem, std::span<const int> selection)
    {
        std::vector<char> covered(problem.size(), 0);
        for (int c : selection)
            for (int r : problem.columns.at(c))
                covered[r] = 1;
        return std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; });
    }

    std::vector<int> solve_set_cover_greedy(const CoverageProblem & problem)
    {
        const std::size_t m = problem.size();
        std::vector<char> coverable(m, 0);
        for (const auto & col : problem.columns)
            for (int r : col)
                coverable[r] = 1;
        for (std::size_t r = 0; r < m; ++r)
            if (!coverable[r])
                throw InfeasibleCoverError("set cover infeasible: candidate " + std::to_string(r) +
                                           " is covered by no column");

        // Lazy max-heap on (gain desc, index asc); stored gains are upper bounds.
        using Entry = std::pair<std::size_t, int>;
        auto worse = [](const Entry & a, const Entry & b) {
            return a.first != b.first ? a.first < b.first : a.second > b.second;
        };
        std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
        for (std::size_t c = 0; c < m; ++c)
            heap.push({problem.columns[c].size(), static_cast<int>(c)});

        std::vector<char> covered(m, 0);
        std::size_t remaining = m;
        std::vector<int> selected;
        while (remaining > 0)
        {
            const auto [stale, c] = heap.top();
            heap.pop();
            std::size_t gain = 0;
            for (int r : problem.columns[c])
                gain += covered[r] ? 0 : 1;
            if (gain != stale)
            {
                heap.push({gain, c});
                continue;
            }
            for (int r : problem.columns[c])
                if (!covered[r])
                {
                    covered[r] = 1;
                    --remaining;
                }
            selected.push_back(c);
        }
        std::sort(selected.begin(), selected.end());
        return selected;
    }

    namespace
    {
        bool search_cover(const std::vector<std::uint64_t> & masks, std::uint64_t full, std::uint64_t have,
                          std::size_t start, std::size_t picks, std::vector<int> & chosen)
        {
            if (picks == 0)
                return have == full;
            for (std::size_t c = start; c + picks <= masks.size(); ++c)
            {
                chosen.push_back(static_cast<int>(c));
                if (search_cover(masks, full, have | masks[c], c + 1, picks - 1, chosen))
                    return true;
                chosen.pop_back();
            }
            return false;
        }
    }

    std::vector<int> solve_set_cover_exact(const CoverageProblem & problem, std::size_t max_m)
    {
        const std::size_t m = problem.size();
        if (m > max_m || m > 63)
            throw std::invalid_argument("solve_set_cover_exact: " + std::to_string(m) +
                                        " candidates exceed the limit of " + std::to_string(std::min<std::size_t>(max_m, 63)));
        if (m == 0)
            return {};
        std::vector<std::uint64_t> masks(m, 0);
        std::uint64_t reachable = 0;
        for (std::size_t c = 0; c < m; ++c)
        {
            for (int r : problem.columns[c])
                masks[c] |= std::uint64_t{1} << r;
            reachable |= masks[c];
        }
        const std::uint64_t full = m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
        if (reachable != full)
            throw InfeasibleCoverError("set cover infeasible: some candidate is covered by no column");
        std::vector<int> chosen;
        for (std::size_t k = 1; k <= m; ++k)
            if (search_cover(masks, full, 0, 0, k, chosen))
                return chosen;
        throw InfeasibleCoverError("set cover infeasible");
    }

    InitResult initialize_spheres(std::span<const View> views, const InitConfig & config)
    {
        VoxelGrid grid = carve_visual_hull(views, config.grid_resolution, config.bounds);
        InitResult result;
        if (grid.occupied_count() == 0)
            throw std::runtime_error("initialization failed: " + grid.warning);
        distance_transform(grid);
        const CoverageProblem problem = build_coverage_problem(grid, config.alpha, config.beta);
        result.candidate_count = problem.size();
        for (int c : solve_set_cover_greedy(problem))
        {
            result.centers.push_back(problem.candidates[c]);
            result.radii.push_back(problem.radii[c]);
        }
        return result;
    }

    void write_init_file(const InitResult & result, const InitConfig & config, const std::filesystem::path & path)
    {
        nlohmann::json doc;
        doc["alpha"] = config.alpha;
        doc["beta"] = config.beta;
        doc["grid_resolution"] = config.grid_resolution;
        doc["candidate_count"] = result.candidate_count;
        doc["spheres"] = nlohmann::json::array();
        for (std::size_t i = 0; i < result.centers.size(); ++i)
            doc["spheres"].push_back(
                {{"center", {result.centers[i].x(), result.centers[i].y(), result.centers[i].z()}},
                 {"radius", result.radii[i]}});
        std::ofstream out(path);
        if (!out)
            throw IoError("cannot open '" + path.string() + "' for writing");
        out << doc.dump(2) << '\n';
    }

    InitResult read_init_file(const std::filesystem::path & path)
    {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot open init file '" + path.string() + "'");
        InitResult result;
        try
        {
            const nlohmann::json doc = nlohmann::json::parse(in);
            for (const auto & s : doc.at("spheres"))
            {
                const auto & c = s.at("center");
                if (c.size() != 3)
                    throw ParseError(0, "init file '" + path.string() + "': center needs 3 numbers");
                result.centers.emplace_back(c[0].get<double>(), c[1].get<double>(), c[2].get<double>());
                result.radii.push_back(s.at("radius").get<double>());
            }
            result.candidate_count = doc.value("candidate_count", result.centers.size());
        }
        catch (const nlohmann::json::exception & e)
        {
            throw ParseError(0, "init file '" + path.string() + "': " + e.what());
        }
        if (result.centers.empty())
            throw ParseError(0, "init file '" + path.string() + "' lists no spheres");
        return result;
    }
}
