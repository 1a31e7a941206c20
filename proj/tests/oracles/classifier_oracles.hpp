#pragma once

// Independent reference computations for the classifier tests. Written with
// plain loops and std::array so they share no code with the Eigen versions.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace keydyn::testing {

struct Point2 {
  double x, y;
  int label;  // +1 adult, -1 child
};

/// Fisher direction S^-1 (mu_adult - mu_child) for 2-D data, with S the pooled
/// within-class scatter divided by (n - 2), inverted through the adjugate.
inline std::array<double, 3> fisher_2d(const std::vector<Point2>& pts) {
  double ma[2] = {0, 0}, mc[2] = {0, 0};
  int na = 0, nc = 0;
  for (const auto& p : pts) {
    double* m = p.label > 0 ? ma : mc;
    m[0] += p.x;
    m[1] += p.y;
    (p.label > 0 ? na : nc)++;
  }
  ma[0] /= na, ma[1] /= na, mc[0] /= nc, mc[1] /= nc;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& p : pts) {
    const double* m = p.label > 0 ? ma : mc;
    const double dx = p.x - m[0], dy = p.y - m[1];
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double denom = static_cast<double>(pts.size()) - 2.0;
  sxx /= denom, sxy /= denom, syy /= denom;
  const double det = sxx * syy - sxy * sxy;
  const double d0 = ma[0] - mc[0], d1 = ma[1] - mc[1];
  const double w0 = (syy * d0 - sxy * d1) / det;
  const double w1 = (-sxy * d0 + sxx * d1) / det;
  const double b = -(w0 * (ma[0] + mc[0]) + w1 * (ma[1] + mc[1])) / 2.0;
  return {w0, w1, b};
}

/// Majority label among the three nearest points, found by sorting every
/// distance. Returns 0 when the third and fourth distances tie.
inline int majority_of_three(const std::vector<std::vector<double>>& pts,
                             const std::vector<int>& labels, const std::vector<double>& q) {
  std::vector<std::pair<double, int>> d;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double s = 0;
    for (std::size_t j = 0; j < q.size(); ++j) s += (pts[i][j] - q[j]) * (pts[i][j] - q[j]);
    d.emplace_back(std::sqrt(s), labels[i]);
  }
  std::sort(d.begin(), d.end());
  if (d.size() > 3 && d[2].first == d[3].first) return 0;
  const int sum = d[0].second + d[1].second + d[2].second;
  return sum > 0 ? 1 : -1;
}

}  // namespace keydyn::testing
