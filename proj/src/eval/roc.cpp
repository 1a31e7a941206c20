#include "keydyn/eval/roc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "keydyn/error.hpp"

namespace keydyn {

std::vector<RocPoint> roc_curve(std::span<const Scored> scored) {
  std::vector<Scored> s(scored.begin(), scored.end());
  std::size_t adults = 0, children = 0;
  for (const auto& x : s) {
    if (std::isnan(x.score)) throw Error(ErrorCode::invalid_argument, "score is NaN");
    (x.label > 0 ? adults : children)++;
  }
  if (adults == 0 || children == 0) {
    throw Error(ErrorCode::one_class_only, "ROC needs both adult and child scores");
  }
  std::sort(s.begin(), s.end(), [](const Scored& a, const Scored& b) { return a.score > b.score; });

  const double na = static_cast<double>(adults), nc = static_cast<double>(children);
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<RocPoint> roc;
  roc.push_back({inf, 1.0, 0.0});
  std::size_t adults_above = 0, children_above = 0;  // scores >= current threshold
  for (std::size_t i = 0; i < s.size();) {
    const double t = s[i].score;
    for (; i < s.size() && s[i].score == t; ++i) (s[i].label > 0 ? adults_above : children_above)++;
    roc.push_back({t, static_cast<double>(adults - adults_above) / na, static_cast<double>(children_above) / nc});
  }
  roc.push_back({-inf, 0.0, 1.0});
  return roc;
}

EqualError equal_error(const std::vector<RocPoint>& roc) {
  for (std::size_t k = 0; k < roc.size(); ++k) {
    const auto& p = roc[k];
    if (p.type1 == p.type2) return {p.type1, p.threshold};
    if (k + 1 == roc.size()) break;
    const auto& q = roc[k + 1];
    if (p.type1 > p.type2 && q.type1 < q.type2) {
      const double x1 = p.type1, y1 = p.type2, x2 = q.type1, y2 = q.type2;
      // Intersection of the segment with the diagonal, written so that
      // swapping the axes and reversing the segment gives the same bits.
      const double rate = (x1 * y2 - x2 * y1) / ((x1 - y1) - (x2 - y2));
      double threshold;
      if (std::isinf(p.threshold)) {
        threshold = q.threshold;
      } else if (std::isinf(q.threshold)) {
        threshold = p.threshold;
      } else {
        const double lambda = (x1 - y1) / ((x1 - y1) - (x2 - y2));
        threshold = p.threshold + lambda * (q.threshold - p.threshold);
      }
      return {rate, threshold};
    }
  }
  throw Error(ErrorCode::invalid_argument, "ROC curve has no type1/type2 crossing");
}

double compute_eer(const std::vector<RocPoint>& roc) { return 100.0 * equal_error(roc).rate; }

double compute_eer(std::span<const Scored> scored) { return compute_eer(roc_curve(scored)); }

}  // namespace keydyn
