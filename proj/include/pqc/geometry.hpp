#pragma once

#include <algorithm>
#include <cmath>

namespace pqc {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

// Axis-aligned box given by center and strictly positive half extents.
struct Box {
    Vec3 center;
    Vec3 half;

    Vec3 lo() const { return center - half; }
    Vec3 hi() const { return center + half; }
    double top() const { return center.z + half.z; }

    bool contains(const Vec3& p) const {
        return std::abs(p.x - center.x) <= half.x && std::abs(p.y - center.y) <= half.y &&
               std::abs(p.z - center.z) <= half.z;
    }

    bool contains_xy(double px, double py) const {
        return std::abs(px - center.x) <= half.x && std::abs(py - center.y) <= half.y;
    }

    // Euclidean distance from p to the box surface; 0 if p is inside.
    double distance(const Vec3& p) const {
        double dx = std::max(std::abs(p.x - center.x) - half.x, 0.0);
        double dy = std::max(std::abs(p.y - center.y) - half.y, 0.0);
        double dz = std::max(std::abs(p.z - center.z) - half.z, 0.0);
        return std::sqrt(dx * dx + dy * dy + dz * dz);
    }

    // Separation between two boxes in each axis; negative means overlap.
    bool overlaps(const Box& o, double gap = 0.0) const {
        return std::abs(center.x - o.center.x) < half.x + o.half.x + gap &&
               std::abs(center.y - o.center.y) < half.y + o.half.y + gap &&
               std::abs(center.z - o.center.z) < half.z + o.half.z + gap;
    }

    // 2D distance from a point to the box footprint rectangle (0 inside).
    double distance_xy(double px, double py) const {
        double dx = std::max(std::abs(px - center.x) - half.x, 0.0);
        double dy = std::max(std::abs(py - center.y) - half.y, 0.0);
        return std::sqrt(dx * dx + dy * dy);
    }
};

}  // namespace pqc
