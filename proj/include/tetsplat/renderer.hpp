#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "image.hpp"
#include "tet_mesh.hpp"
#include "types.hpp"

namespace tetsplat
{
    /**
     * Pinhole camera. The camera looks down its -z axis; a camera-space point
     * (x, y, z_c) has depth z = -z_c and projects to
     *   u = K00 x/z + K01 y/z + K02,   v = K11 y/z + K12.
     * Pixel (i, j) covers [i, i+1) x [j, j+1); its center is (i + 0.5, j + 0.5).
     */
    struct Camera
    {
        Mat3 intrinsics = Mat3::Identity();
        Mat4 world_to_camera = Mat4::Identity();
        int width = 0;
        int height = 0;

        /// Throws std::invalid_argument if focal lengths are not positive, the
        /// rotation is not orthonormal to 1e-6, or the image size is empty.
        void validate() const;

        Mat3 rotation() const { return world_to_camera.topLeftCorner<3, 3>(); }
        Vec3 translation() const { return world_to_camera.topRightCorner<3, 1>(); }
        Vec3 center() const { return -rotation().transpose() * translation(); }
        Vec3 to_camera(const Vec3 & world) const { return rotation() * world + translation(); }

        /// Camera at eye looking at target, with vertical field of view in degrees.
        static Camera look_at(const Vec3 & eye, const Vec3 & target, const Vec3 & up, double fov_y_degrees, int width,
                              int height);
    };

    struct Projection
    {
        Vec2 pixel = Vec2::Zero();
        double depth = 0.0;   // camera-space depth, positive in front of the camera
        bool in_front = false; // depth > 0
    };

    Projection project(const Camera & camera, const Vec3 & point);

    /// Camera plus targets. depth and normal are empty when not supervised.
    struct View
    {
        Camera camera;
        Image mask;   // 1 channel, [0,1]
        Image depth;  // 1 channel, background pixels hold RenderConfig::background_depth
        Image normal; // 3 channels, camera space, zero vector on background

        void validate() const;
    };

    struct RenderConfig
    {
        double sigma = 0.1;           // soft-silhouette sharpness, squared pixels
        double near_clip = 1e-3;
        double far_clip = 100.0;
        double background_depth = 0.0;
        // An outside face contributes only while d^2/sigma < cutoff_logit, i.e.
        // within cutoff_radius() pixels; beyond it its term is below e^-28.
        double cutoff_logit = 28.0;

        void validate() const;
        double cutoff_radius() const;
    };

    /// Soft silhouette: I = 1 - prod_j (1 - sigmoid(delta_j d_j^2 / sigma)) over front faces.
    Image render_silhouette_soft(const SurfaceMesh & surface, const Camera & camera, const RenderConfig & config);

    /// Hard z-buffer depth; background pixels get config.background_depth.
    Image render_depth(const SurfaceMesh & surface, const Camera & camera, const RenderConfig & config);

    /// Hard-rasterized flat face normals in camera space; background is zero.
    Image render_normal(const SurfaceMesh & surface, const Camera & camera, const RenderConfig & config);

    struct LossWeights
    {
        double silhouette = 1.0;
        double depth = 1.0;
        double normal = 0.0;
    };

    struct RenderLoss
    {
        double total = 0.0;
        double silhouette = 0.0; // unweighted, summed over views
        double depth = 0.0;
        double normal = 0.0;
        Eigen::VectorXd gradient; // d total / d vertex positions (3 per vertex)
    };

    /**
     * Phi = sum over views of
     *   w_s MSE(soft silhouette, mask)
     * + w_d MSE(depth, target depth) over pixels foreground in render and target
     * + w_n mean(1 - n . n_target) over pixels foreground in render and target,
     * with the analytic gradient with respect to the surface vertex positions.
     * Views are evaluated independently and reduced in order.
     */
    RenderLoss render_loss_and_grad(const SurfaceMesh & surface, std::span<const View> views,
                                    const RenderConfig & config, const LossWeights & weights);

    /// Same loss on the union surface of a set; the gradient has length 3NM and is
    /// zero on interior tet vertices.
    RenderLoss render_loss_and_grad(const TetSphereSet & set, std::span<const View> views,
                                    const RenderConfig & config, const LossWeights & weights);

    /// Variant for a precomputed union topology and flat positions x (length 3NM).
    RenderLoss render_loss_and_grad(const UnionTopology & topology, const Eigen::VectorXd & x,
                                    std::span<const View> views, const RenderConfig & config,
                                    const LossWeights & weights);
}
