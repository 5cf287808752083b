#include "tetsplat/mesh_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace tetsplat
{
    namespace
    {
        std::ofstream open_out(const std::filesystem::path & path)
        {
            std::ofstream out(path);
            if (!out)
                throw IoError("cannot open '" + path.string() + "' for writing");
            return out;
        }

        std::ifstream open_in(const std::filesystem::path & path)
        {
            std::ifstream in(path);
            if (!in)
                throw IoError("cannot open '" + path.string() + "' for reading");
            return in;
        }

        std::string fmt_point(const Vec3 & p)
        {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g", p.x(), p.y(), p.z());
            return buf;
        }

        int parse_obj_index(const std::string & token, std::size_t vertex_count, std::size_t line)
        {
            const std::string head = token.substr(0, token.find('/'));
            long value = 0;
            try
            {
                std::size_t used = 0;
                value = std::stol(head, &used);
                if (used != head.size())
                    throw std::invalid_argument(head);
            }
            catch (const std::exception &)
            {
                throw ParseError(line, "line " + std::to_string(line) + ": bad face index '" + token + "'");
            }
            if (value == 0)
                throw ParseError(line, "line " + std::to_string(line) + ": face index 0 (OBJ indices are 1-based)");
            const long resolved = value > 0 ? value - 1 : static_cast<long>(vertex_count) + value;
            if (resolved < 0 || resolved >= static_cast<long>(vertex_count))
                throw ParseError(line, "line " + std::to_string(line) + ": face index " + head + " out of range");
            return static_cast<int>(resolved);
        }
    }

    void save_obj(const SurfaceMesh & mesh, const std::filesystem::path & path)
    {
        auto out = open_out(path);
        for (const Vec3 & v : mesh.vertices)
            out << "v " << fmt_point(v) << '\n';
        for (const Tri & f : mesh.faces)
            out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
        if (!out)
            throw IoError("write to '" + path.string() + "' failed");
    }

    SurfaceMesh load_obj(const std::filesystem::path & path)
    {
        auto in = open_in(path);
        SurfaceMesh mesh;
        std::string text;
        std::size_t line_no = 0;
        while (std::getline(in, text))
        {
            ++line_no;
            std::istringstream ls(text);
            std::string tag;
            if (!(ls >> tag) || tag[0] == '#')
                continue;
            if (tag == "v")
            {
                Vec3 p;
                if (!(ls >> p.x() >> p.y() >> p.z()))
                    throw ParseError(line_no, "line " + std::to_string(line_no) + ": malformed vertex");
                mesh.vertices.push_back(p);
            }
            else if (tag == "f")
            {
                std::vector<int> corners;
                std::string token;
                while (ls >> token)
                    corners.push_back(parse_obj_index(token, mesh.vertices.size(), line_no));
                if (corners.size() < 3)
                    throw ParseError(line_no, "line " + std::to_string(line_no) + ": face with fewer than 3 corners");
                for (std::size_t i = 1; i + 1 < corners.size(); ++i)
                {
                    const Tri tri = {corners[0], corners[i], corners[i + 1]};
                    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
                        throw ParseError(line_no, "line " + std::to_string(line_no) + ": face repeats a vertex");
                    mesh.faces.push_back(tri);
                }
            }
        }
        return mesh;
    }

    void save_tet(std::span<const Vec3> vertices, std::span<const Tet> tets, const std::filesystem::path & path)
    {
        auto out = open_out(path);
        out << "tetmesh " << vertices.size() << ' ' << tets.size() << '\n';
        for (const Vec3 & v : vertices)
            out << "v " << fmt_point(v) << '\n';
        for (const Tet & t : tets)
            out << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
        if (!out)
            throw IoError("write to '" + path.string() + "' failed");
    }

    void save_tet(const TetMesh & mesh, const std::filesystem::path & path)
    {
        save_tet(mesh.vertices(), mesh.tets(), path);
    }

    TetFile load_tet(const std::filesystem::path & path)
    {
        auto in = open_in(path);
        std::string text;
        std::size_t line_no = 1;
        if (!std::getline(in, text))
            throw ParseError(1, "empty tet file");
        std::istringstream header(text);
        std::string magic;
        std::size_t n = 0, t = 0;
        if (!(header >> magic >> n >> t) || magic != "tetmesh")
            throw ParseError(1, "line 1: expected 'tetmesh <N> <T>'");

        TetFile file;
        file.vertices.reserve(n);
        file.tets.reserve(t);
        while (std::getline(in, text))
        {
            ++line_no;
            std::istringstream ls(text);
            std::string tag;
            if (!(ls >> tag))
                continue;
            if (tag == "v" && file.vertices.size() < n && file.tets.empty())
            {
                Vec3 p;
                if (!(ls >> p.x() >> p.y() >> p.z()))
                    throw ParseError(line_no, "line " + std::to_string(line_no) + ": malformed vertex");
                file.vertices.push_back(p);
            }
            else if (tag == "t" && file.vertices.size() == n && file.tets.size() < t)
            {
                Tet tet;
                if (!(ls >> tet[0] >> tet[1] >> tet[2] >> tet[3]))
                    throw ParseError(line_no, "line " + std::to_string(line_no) + ": malformed tet");
                for (int v : tet)
                    if (v < 0 || v >= static_cast<int>(n))
                        throw ParseError(line_no, "line " + std::to_string(line_no) + ": tet index out of range");
                file.tets.push_back(tet);
            }
            else
                throw ParseError(line_no, "line " + std::to_string(line_no) + ": unexpected record '" + tag + "'");
        }
        if (file.vertices.size() != n || file.tets.size() != t)
            throw ParseError(line_no, "tet file ended before the declared counts were read");
        return file;
    }
}
