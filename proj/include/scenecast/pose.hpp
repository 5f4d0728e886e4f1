// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "scenecast/common.hpp"

namespace scenecast {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Conventions, fixed once for the whole repo:
//   right-handed world, +y up, camera looks down its local -z,
//   extrinsics are world-to-camera, t = -R * eye.
//   yaw(theta) turns the forward axis from -z toward +x for theta > 0
//   ("pan right"); pitch(p) tilts it toward +y for p > 0.
//   longitude(dir) = atan2(x, -z), latitude(dir) = asin(y).

inline Mat3 yaw_rotation(double yaw_rad) {
  const double c = std::cos(yaw_rad), s = std::sin(yaw_rad);
  Mat3 r;
  r << c, 0, -s, 0, 1, 0, s, 0, c;
  return r;
}

inline Mat3 pitch_rotation(double pitch_rad) {
  const double c = std::cos(pitch_rad), s = std::sin(pitch_rad);
  Mat3 r;
  r << 1, 0, 0, 0, c, -s, 0, s, c;
  return r;
}

/// Unit direction for (longitude, latitude) in radians.
inline Vec3 dir_from_lonlat(double lon, double lat) {
  const double cl = std::cos(lat);
  return Vec3(std::sin(lon) * cl, std::sin(lat), -std::cos(lon) * cl);
}

inline double longitude_of(const Vec3& d) { return std::atan2(d.x(), -d.z()); }
inline double latitude_of(const Vec3& d) {
  return std::asin(std::clamp(d.y() / d.norm(), -1.0, 1.0));
}

/// World-to-camera extrinsics for one frame.
struct CameraPose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 eye() const { return -(rotation.transpose() * translation); }
  Vec3 forward() const { return -rotation.row(2).transpose(); }
  Vec3 right() const { return rotation.row(0).transpose(); }
  Vec3 up() const { return rotation.row(1).transpose(); }

  /// Camera-to-world rotation.
  Mat3 view_rotation() const { return rotation.transpose(); }
};

inline bool is_rotation(const Mat3& r, double tol = 1e-9) {
  const double ortho = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
  return ortho < tol && std::abs(r.determinant() - 1.0) < tol;
}

inline void require_rotation(const Mat3& r, const char* who) {
  if (!is_rotation(r)) fail("NotARotation", std::string(who) + ": matrix fails orthonormality check");
}

struct Trajectory {
  std::vector<CameraPose> poses;

  int frame_count() const { return static_cast<int>(poses.size()); }
};

inline void require_trajectory(const Trajectory& t, const char* who) {
  if (t.frame_count() < 2) fail("LengthMismatch", std::string(who) + ": trajectory needs >= 2 frames");
}

/// Pose with forward axis pointing from eye to target.
inline CameraPose look_at(const Vec3& eye, const Vec3& target, const Vec3& up) {
  const Vec3 f_raw = target - eye;
  if (f_raw.norm() <= 1e-9) fail("DegenerateLookAt", "target coincides with eye");
  const Vec3 f = f_raw.normalized();
  const Vec3 r_raw = f.cross(up);
  if (r_raw.norm() <= 1e-9) fail("DegenerateLookAt", "up parallel to view direction");
  const Vec3 r = r_raw.normalized();
  const Vec3 u = r.cross(f);
  CameraPose pose;
  pose.rotation.row(0) = r.transpose();
  pose.rotation.row(1) = u.transpose();
  pose.rotation.row(2) = -f.transpose();
  pose.translation = -(pose.rotation * eye);
  return pose;
}

/// Pose with the given eye, yaw and pitch (radians), zero roll.
inline CameraPose pose_from_yaw_pitch(const Vec3& eye, double yaw_rad, double pitch_rad) {
  CameraPose pose;
  pose.rotation = (yaw_rotation(yaw_rad) * pitch_rotation(pitch_rad)).transpose();
  pose.translation = -(pose.rotation * eye);
  return pose;
}

/// Geodesic angle between two rotations, in radians, range [0, pi].
inline double geodesic_angle(const Mat3& r1, const Mat3& r2) {
  require_rotation(r1, "geodesic_angle");
  require_rotation(r2, "geodesic_angle");
  const double tr = (r1 * r2.transpose()).trace();
  return std::acos(std::clamp((tr - 1.0) / 2.0, -1.0, 1.0));
}

/// Rebases every frame to the relative transform from frame 0: frame 0
/// becomes the identity. Invariant to a change of world frame.
inline Trajectory normalize_trajectory(const Trajectory& traj) {
  require_trajectory(traj, "normalize_trajectory");
  const Mat3 r0t = traj.poses[0].rotation.transpose();
  const Vec3 t0 = traj.poses[0].translation;
  Trajectory out;
  out.poses.reserve(traj.poses.size());
  for (const CameraPose& p : traj.poses) {
    CameraPose q;
    q.rotation = p.rotation * r0t;
    q.translation = p.translation - q.rotation * t0;
    out.poses.push_back(q);
  }
  // Frame 0's relative transform is the identity by construction; store it
  // exactly so repeated normalization is bit-stable.
  out.poses[0] = CameraPose{};
  return out;
}

struct PoseError {
  double rot_err_deg = 0.0;
  double trans_err = 0.0;
  double cam_mc = 0.0;
};

/// Per-frame error sums between two equal-length trajectories. Callers are
/// expected to pass trajectories normalized to their own first frame.
inline PoseError pose_error(const Trajectory& gen, const Trajectory& gt) {
  if (gen.frame_count() != gt.frame_count())
    fail("LengthMismatch", "pose_error: trajectories differ in frame count");
  require_trajectory(gen, "pose_error");
  PoseError e;
  for (int f = 0; f < gen.frame_count(); ++f) {
    const CameraPose& a = gen.poses[f];
    const CameraPose& b = gt.poses[f];
    e.rot_err_deg += rad_to_deg(geodesic_angle(a.rotation, b.rotation));
    e.trans_err += (a.translation - b.translation).norm();
    double fro2 = (a.rotation - b.rotation).squaredNorm() +
                  (a.translation - b.translation).squaredNorm();
    e.cam_mc += std::sqrt(fro2);
  }
  return e;
}

// --- Trajectory file format -------------------------------------------------
//
//   scenecast-trajectory v1
//   frames <N>
//   <r00 r01 r02 t0 r10 r11 r12 t1 r20 r21 r22 t2>    x N lines
//
// Values are printed with 17 significant digits so the write->read round trip
// is value-exact at 64-bit precision.

inline void write_trajectory(const std::string& path, const Trajectory& traj) {
  require_trajectory(traj, "write_trajectory");
  std::ofstream out(path);
  if (!out) fail("IoError", "cannot open for write: " + path);
  out << "scenecast-trajectory v1\n";
  out << "frames " << traj.frame_count() << "\n";
  char buf[32];
  for (const CameraPose& p : traj.poses) {
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 4; ++c) {
        const double v = c < 3 ? p.rotation(r, c) : p.translation(r);
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << buf << (r == 2 && c == 3 ? "" : " ");
      }
    }
    out << "\n";
  }
  if (!out) fail("IoError", "write failed: " + path);
}

inline Trajectory read_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("IoError", "cannot open: " + path);
  std::string header;
  std::getline(in, header);
  if (header != "scenecast-trajectory v1")
    fail("ParseError", "bad trajectory header in " + path);
  std::string word;
  int n = 0;
  in >> word >> n;
  if (!in || word != "frames" || n < 2)
    fail("ParseError", "bad frame count in " + path);
  Trajectory traj;
  traj.poses.resize(n);
  for (int f = 0; f < n; ++f) {
    CameraPose& p = traj.poses[f];
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 4; ++c) {
        double v;
        in >> v;
        if (!in) fail("ParseError", "truncated trajectory file: " + path);
        if (c < 3)
          p.rotation(r, c) = v;
        else
          p.translation(r) = v;
      }
    require_rotation(p.rotation, "read_trajectory");
  }
  return traj;
}

}  // namespace scenecast
