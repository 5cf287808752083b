#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tetsplat
{
    using Vec2 = Eigen::Vector2d;
    using Vec3 = Eigen::Vector3d;
    using Mat3 = Eigen::Matrix3d;
    using Mat4 = Eigen::Matrix4d;

    /// Four vertex indices of a tetrahedron.
    using Tet = std::array<int, 4>;
    /// Three vertex indices of a triangle.
    using Tri = std::array<int, 3>;

    /// Raised when a rest-state tetrahedron has (numerically) zero volume.
    class DegenerateTetError : public std::runtime_error
    {
    public:
        DegenerateTetError(std::size_t tet_index, const std::string & what)
            : std::runtime_error(what), tet_index_(tet_index) {}

        std::size_t tet_index() const { return tet_index_; }

    private:
        std::size_t tet_index_;
    };

    /// Malformed input file. line() is 1-based; 0 when not tied to a line.
    class ParseError : public std::runtime_error
    {
    public:
        ParseError(std::size_t line, const std::string & what)
            : std::runtime_error(what), line_(line) {}

        std::size_t line() const { return line_; }

    private:
        std::size_t line_;
    };

    /// Unreadable/unwritable path.
    class IoError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };
}
