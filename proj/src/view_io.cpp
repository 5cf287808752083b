#include "tetsplat/view_io.hpp"

#include <fstream>

#include <json.hpp>

#include "tetsplat/types.hpp"

namespace tetsplat
{
    namespace
    {
        using nlohmann::json;

        template <int R, int C>
        Eigen::Matrix<double, R, C> read_matrix(const json & j, const char * key, std::size_t entry)
        {
            const json & a = j.at(key);
            if (!a.is_array() || a.size() != static_cast<std::size_t>(R * C))
                throw ParseError(0, "camera " + std::to_string(entry) + ": '" + key + "' needs " +
                                        std::to_string(R * C) + " numbers");
            Eigen::Matrix<double, R, C> m;
            for (int r = 0; r < R; ++r)
                for (int c = 0; c < C; ++c)
                    m(r, c) = a[r * C + c].get<double>();
            return m;
        }

        std::filesystem::path resolve(const std::filesystem::path & base, const std::string & p)
        {
            const std::filesystem::path path(p);
            return path.is_absolute() ? path : base / path;
        }
    }

    std::vector<CameraEntry> read_camera_file(const std::filesystem::path & path)
    {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot open camera file '" + path.string() + "'");
        json doc;
        try
        {
            doc = json::parse(in);
        }
        catch (const json::parse_error & e)
        {
            throw ParseError(0, "camera file '" + path.string() + "': " + e.what());
        }
        if (!doc.is_array() || doc.empty())
            throw ParseError(0, "camera file '" + path.string() + "' must hold a non-empty list");

        std::vector<CameraEntry> entries;
        for (std::size_t i = 0; i < doc.size(); ++i)
        {
            const json & j = doc[i];
            try
            {
                CameraEntry e;
                e.camera.intrinsics = read_matrix<3, 3>(j, "intrinsics", i);
                e.camera.world_to_camera = read_matrix<4, 4>(j, "world_to_camera", i);
                e.camera.width = j.at("width").get<int>();
                e.camera.height = j.at("height").get<int>();
                e.mask_path = j.at("mask_path").get<std::string>();
                e.depth_path = j.value("depth_path", "");
                e.normal_path = j.value("normal_path", "");
                e.camera.validate();
                entries.push_back(std::move(e));
            }
            catch (const json::exception & ex)
            {
                throw ParseError(0, "camera " + std::to_string(i) + " in '" + path.string() + "': " + ex.what());
            }
            catch (const std::invalid_argument & ex)
            {
                throw ParseError(0, "camera " + std::to_string(i) + " in '" + path.string() + "': " + ex.what());
            }
        }
        return entries;
    }

    void write_camera_file(const std::vector<CameraEntry> & entries, const std::filesystem::path & path)
    {
        json doc = json::array();
        for (const CameraEntry & e : entries)
        {
            json j;
            std::vector<double> k, w;
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c)
                    k.push_back(e.camera.intrinsics(r, c));
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c)
                    w.push_back(e.camera.world_to_camera(r, c));
            j["intrinsics"] = k;
            j["world_to_camera"] = w;
            j["width"] = e.camera.width;
            j["height"] = e.camera.height;
            j["mask_path"] = e.mask_path;
            if (!e.depth_path.empty())
                j["depth_path"] = e.depth_path;
            if (!e.normal_path.empty())
                j["normal_path"] = e.normal_path;
            doc.push_back(std::move(j));
        }
        std::ofstream out(path);
        if (!out)
            throw IoError("cannot open '" + path.string() + "' for writing");
        out << doc.dump(2) << '\n';
    }

    Image read_depth_image(const std::filesystem::path & path, double background_depth)
    {
        if (path.extension() == ".pfm")
        {
            Image img = read_pfm(path);
            if (img.channels != 1)
                throw ParseError(0, "depth image '" + path.string() + "' must have one channel");
            return img;
        }
        return read_depth_png(path, background_depth);
    }

    std::vector<View> load_views(const std::filesystem::path & camera_file, const std::filesystem::path & views_dir,
                                 double background_depth)
    {
        const std::vector<CameraEntry> entries = read_camera_file(camera_file);
        const std::filesystem::path base = views_dir.empty() ? camera_file.parent_path() : views_dir;
        std::vector<View> views;
        views.reserve(entries.size());
        for (const CameraEntry & e : entries)
        {
            View v;
            v.camera = e.camera;
            v.mask = read_png_gray(resolve(base, e.mask_path));
            if (!e.depth_path.empty())
                v.depth = read_depth_image(resolve(base, e.depth_path), background_depth);
            if (!e.normal_path.empty())
                v.normal = read_pfm(resolve(base, e.normal_path));
            try
            {
                v.validate();
            }
            catch (const std::invalid_argument & ex)
            {
                throw ParseError(0, "view '" + e.mask_path + "': " + ex.what());
            }
            views.push_back(std::move(v));
        }
        return views;
    }
}
