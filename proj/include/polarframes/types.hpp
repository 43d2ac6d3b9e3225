#pragma once

#include <Eigen/Dense>

namespace polarframes {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat32 = Eigen::Matrix<double, 3, 2>;
using Mat62 = Eigen::Matrix<double, 6, 2>;
using Mat42 = Eigen::Matrix<double, 4, 2>;
using Mat63 = Eigen::Matrix<double, 6, 3>;
using Mat64 = Eigen::Matrix<double, 6, 4>;

/// A point (u, v) of a surface chart.
struct ChartPoint {
  double u = 0.0;
  double v = 0.0;
};

/// Axis-aligned open rectangle of chart parameters.
struct ChartDomain {
  double u_min = 0.0;
  double u_max = 0.0;
  double v_min = 0.0;
  double v_max = 0.0;

  bool contains(const ChartPoint& p) const {
    return p.u > u_min && p.u < u_max && p.v > v_min && p.v < v_max;
  }
};

}  // namespace polarframes
