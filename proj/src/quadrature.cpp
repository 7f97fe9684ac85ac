#include "ntt/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace ntt {

namespace {

struct Rule1D {
  std::vector<double> x, w;  // on [0,1]
};

Rule1D gauss01(int n) {
  // Gauss-Legendre on [-1,1], mapped to [0,1].
  static const double x4[] = {0.3399810435848563, 0.8611363115940526};
  static const double w4[] = {0.6521451548625461, 0.3478548451374538};
  static const double x8[] = {0.1834346424956498, 0.5255324099163290,
                              0.7966664774136267, 0.9602898564975363};
  static const double w8[] = {0.3626837833783620, 0.3137066458778873,
                              0.2223810344533745, 0.1012285362903763};
  const double* xs = n == 4 ? x4 : x8;
  const double* ws = n == 4 ? w4 : w8;
  Rule1D r;
  for (int i = 0; i < n / 2; ++i) {
    r.x.push_back(0.5 * (1 - xs[i]));
    r.w.push_back(0.5 * ws[i]);
    r.x.push_back(0.5 * (1 + xs[i]));
    r.w.push_back(0.5 * ws[i]);
  }
  return r;
}

std::vector<QuadPoint> tensor(int n) {
  const Rule1D r = gauss01(n);
  std::vector<QuadPoint> out;
  out.reserve(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.push_back({r.x[i], r.x[j], r.w[i] * r.w[j]});
  return out;
}

} // namespace

const std::vector<QuadPoint>& quad_rule_regular() {
  static const std::vector<QuadPoint> r = tensor(4);
  return r;
}

const std::vector<QuadPoint>& quad_rule_fine() {
  static const std::vector<QuadPoint> r = tensor(8);
  return r;
}

std::vector<QuadPoint> quad_rule_singular(double u0, double v0) {
  const std::array<std::array<double, 2>, 4> corner = {
      {{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  const Rule1D g = gauss01(8);
  std::vector<QuadPoint> out;
  for (int k = 0; k < 4; ++k) {
    const auto& p1 = corner[k];
    const auto& p2 = corner[(k + 1) % 4];
    const double e1u = p1[0] - u0, e1v = p1[1] - v0;
    const double e2u = p2[0] - p1[0], e2v = p2[1] - p1[1];
    const double det = e1u * e2v - e1v * e2u;  // twice the triangle area
    if (std::abs(det) < 1e-14) continue;       // singular point on this edge
    // Composite over a 2x2 split of the degenerate square: a single panel
    // loses accuracy on the thin triangles of off-center fan points.
    const int nsub = 2;
    for (int a = 0; a < nsub; ++a)
      for (int b = 0; b < nsub; ++b)
        for (size_t i = 0; i < g.x.size(); ++i)
          for (size_t j = 0; j < g.x.size(); ++j) {
            const double xi = (a + g.x[i]) / nsub;
            const double eta = (b + g.x[j]) / nsub;
            out.push_back(
                {u0 + xi * (e1u + eta * e2u), v0 + xi * (e1v + eta * e2v),
                 g.w[i] * g.w[j] / (nsub * nsub) * xi * std::abs(det)});
          }
  }
  return out;
}

std::vector<QuadPoint> quad_rule_near(double u0, double v0, double d) {
  const Rule1D g = gauss01(4);
  const double floor = std::max(0.35 * d, 1.0 / 256.0);
  struct Cell {
    double u, v, s;
  };
  std::vector<Cell> stack{{0, 0, 1}};
  std::vector<QuadPoint> out;
  while (!stack.empty()) {
    const Cell c = stack.back();
    stack.pop_back();
    const double du = std::max({c.u - u0, u0 - (c.u + c.s), 0.0});
    const double dv = std::max({c.v - v0, v0 - (c.v + c.s), 0.0});
    const double dist = std::sqrt(du * du + dv * dv + d * d);
    if (c.s > floor && c.s > 0.35 * dist) {
      const double h = c.s / 2;
      stack.push_back({c.u, c.v, h});
      stack.push_back({c.u + h, c.v, h});
      stack.push_back({c.u, c.v + h, h});
      stack.push_back({c.u + h, c.v + h, h});
      continue;
    }
    for (size_t i = 0; i < g.x.size(); ++i)
      for (size_t j = 0; j < g.x.size(); ++j)
        out.push_back({c.u + c.s * g.x[i], c.v + c.s * g.x[j],
                       c.s * c.s * g.w[i] * g.w[j]});
  }
  return out;
}

} // namespace ntt
