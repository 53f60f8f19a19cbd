//
// decoyforge - Copyright 2026 The decoyforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DECOYFORGE_GEOMETRY_HPP_
#define DECOYFORGE_GEOMETRY_HPP_

#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace decoyforge {

using Vec3 = Eigen::Vector3d;
using Coords = std::vector<Vec3>;

inline Vec3 centroid(std::span<const Vec3> pts) {
  Vec3 c = Vec3::Zero();
  for (const Vec3 &p: pts)
    c += p;
  return pts.empty() ? c : Vec3(c / static_cast<double>(pts.size()));
}

struct Box {
  Vec3 lo;
  Vec3 hi;

  bool contains(const Vec3 &p) const {
    return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
  }
};

inline Box bounding_box(std::span<const Vec3> pts, double padding) {
  Box box { Vec3::Constant(padding), Vec3::Constant(-padding) };
  if (pts.empty())
    return box;
  box.lo = pts.front();
  box.hi = pts.front();
  for (const Vec3 &p: pts) {
    box.lo = box.lo.cwiseMin(p);
    box.hi = box.hi.cwiseMax(p);
  }
  box.lo.array() -= padding;
  box.hi.array() += padding;
  return box;
}

}  // namespace decoyforge

#endif  // DECOYFORGE_GEOMETRY_HPP_
