#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "cgks/core/types.hpp"

namespace cgks::quadrature {

struct Rule1D {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

/// Gauss-Legendre nodes by Newton iteration on P_n.
inline Rule1D gauss_legendre(int n) {
  Rule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

/// Symmetric 3-point rule on a triangle, exact through degree 2. Barycentric
/// coordinates of each point; weights are 1/3.
inline constexpr std::array<std::array<double, 3>, 3> kTrianglePoints{{
    {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
    {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
    {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0},
}};

/// 2x2 tensor Gauss-Legendre points on the reference square [-1,1]^2.
inline constexpr double kGauss2 = 0.57735026918962576451;  // 1/sqrt(3)
inline constexpr std::array<std::array<double, 2>, 4> kQuadPoints{{
    {-kGauss2, -kGauss2},
    {kGauss2, -kGauss2},
    {kGauss2, kGauss2},
    {-kGauss2, kGauss2},
}};

/// Bilinear map of the reference square onto the quad a-b-c-d (counter-clockwise).
inline Vec3 bilinear(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, double xi, double eta) {
  return 0.25 * ((1 - xi) * (1 - eta) * a + (1 + xi) * (1 - eta) * b + (1 + xi) * (1 + eta) * c +
                 (1 - xi) * (1 + eta) * d);
}

/// dx/dxi x dx/deta; a 2x2 Gauss sum of it with unit weights is the exact vector area.
inline Vec3 bilinear_area_vector(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, double xi, double eta) {
  const Vec3 dxi = 0.25 * (-(1 - eta) * a + (1 - eta) * b + (1 + eta) * c - (1 + eta) * d);
  const Vec3 deta = 0.25 * (-(1 - xi) * a - (1 + xi) * b + (1 + xi) * c + (1 - xi) * d);
  return dxi.cross(deta);
}


inline double tet_volume(const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec3& p3) {
  return (p1 - p0).dot((p2 - p0).cross(p3 - p0)) / 6.0;
}

/// Point and weight (summing to 1 over the rule) on a tetrahedron, from a
/// collapsed-coordinate (Duffy) product of Gauss-Legendre rules. With n points
/// per direction the rule is exact for polynomials of degree 2n-3.
struct TetPoint {
  std::array<double, 4> bary;
  double weight;
};

inline std::vector<TetPoint> collapsed_tet_rule(int n) {
  const Rule1D gl = gauss_legendre(n);
  std::vector<TetPoint> pts;
  pts.reserve(static_cast<std::size_t>(n) * n * n);
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (gl.nodes[i] + 1.0);
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (gl.nodes[j] + 1.0);
      for (int k = 0; k < n; ++k) {
        const double w = 0.5 * (gl.nodes[k] + 1.0);
        const double x1 = u;
        const double x2 = (1.0 - u) * v;
        const double x3 = (1.0 - u) * (1.0 - v) * w;
        // reference tet volume 1/6, Duffy Jacobian (1-u)^2 (1-v), 1/8 from [-1,1]->[0,1]
        const double wt = gl.weights[i] * gl.weights[j] * gl.weights[k] / 8.0 * (1.0 - u) * (1.0 - u) *
                          (1.0 - v) * 6.0;
        pts.push_back({{1.0 - x1 - x2 - x3, x1, x2, x3}, wt});
      }
    }
  }
  return pts;
}

/// Exact integrals over a tetrahedron of the degree-1 and degree-2 monomials of
/// (x - origin). Output order: x, y, z, x^2, y^2, z^2, xy, yz, xz.
inline std::array<double, 9> tet_monomial_integrals(const Vec3& p0, const Vec3& p1, const Vec3& p2,
                                                    const Vec3& p3, const Vec3& origin) {
  const double vol = tet_volume(p0, p1, p2, p3);
  const std::array<Vec3, 4> v{p0 - origin, p1 - origin, p2 - origin, p3 - origin};
  const Vec3 s = v[0] + v[1] + v[2] + v[3];
  auto second = [&](int i, int j) {
    double acc = s[i] * s[j];
    for (const auto& q : v) acc += q[i] * q[j];
    return vol * acc / 20.0;
  };
  return {vol * s.x() / 4.0, vol * s.y() / 4.0, vol * s.z() / 4.0, second(0, 0), second(1, 1),
          second(2, 2),      second(0, 1),      second(1, 2),      second(0, 2)};
}

}  // namespace cgks::quadrature
