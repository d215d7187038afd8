// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <stdexcept>
#include <vector>

#include "otk/core/geometry.hpp"
#include "otk/nn/ops.hpp"

namespace otk::completion {

inline constexpr double kAlphaCoord = 1.0;
inline constexpr double kAlphaYaw = 0.5;

/// Shifts a GT yaw by a multiple of 2*pi so |pred - adjusted| <= pi.
inline double adjust_gt_yaw(double pred, double gt) { return pred - wrap_angle(pred - gt); }

/// Smooth-L1 of the coordinate residual norm (scalar reference).
inline double coord_loss_value(double residual_norm) {
    return residual_norm < 1.0 ? 0.5 * residual_norm * residual_norm : residual_norm - 0.5;
}

inline double yaw_loss_value(double pred, double gt) { return std::abs(pred - adjust_gt_yaw(pred, gt)); }

/// Regression loss of one decoder head: alpha_coord * mean smooth-L1 on the
/// (x, y) residual norm + alpha_yaw * mean |theta - theta_gt_adjusted|.
template <class S>
nn::Var<S> head_loss(nn::Var<S> xy, nn::Var<S> theta, const std::vector<Pose2D>& gt) {
    if (xy.rows() != static_cast<long>(gt.size()) || theta.rows() != static_cast<long>(gt.size()))
        throw std::invalid_argument("completion loss: prediction/GT length mismatch");
    nn::Graph<S>& g = *xy.g;
    const long k = xy.rows();
    nn::DenseMat<S> gt_xy(k, 2), gt_theta(k, 1);
    const auto& th = theta.value();
    for (long i = 0; i < k; ++i) {
        gt_xy(i, 0) = static_cast<S>(gt[static_cast<std::size_t>(i)].x);
        gt_xy(i, 1) = static_cast<S>(gt[static_cast<std::size_t>(i)].y);
        gt_theta(i, 0) = static_cast<S>(adjust_gt_yaw(static_cast<double>(th(i, 0)),
                                                      gt[static_cast<std::size_t>(i)].theta));
    }
    nn::Var<S> d = nn::sub(xy, g.constant(gt_xy));
    nn::Var<S> norms = nn::sqrt_f(nn::affine(nn::rowwise_sum(nn::square(d)), S(1), S(1e-12)));
    nn::Var<S> coord = nn::mean(nn::smooth_l1(norms));
    nn::Var<S> yaw = nn::mean(nn::abs_f(nn::sub(theta, g.constant(gt_theta))));
    return nn::add(nn::scale(coord, static_cast<S>(kAlphaCoord)),
                   nn::scale(yaw, static_cast<S>(kAlphaYaw)));
}

/// Total training loss: both heads supervised with the same targets, summed.
template <class S>
nn::Var<S> completion_loss(nn::Var<S> init_xy, nn::Var<S> init_theta, nn::Var<S> refined_xy,
                           nn::Var<S> refined_theta, const std::vector<Pose2D>& gt) {
    return nn::add(head_loss(init_xy, init_theta, gt), head_loss(refined_xy, refined_theta, gt));
}

}  // namespace otk::completion
