#pragma once

#include <span>
#include <vector>

namespace keydyn {

struct Scored {
  double score = 0;
  int label = 0;  // +1 adult, -1 child
};

/// One operating point: predict adult iff score >= threshold.
/// type1 = adults scored below the threshold, type2 = children at or above it.
struct RocPoint {
  double threshold = 0;
  double type1 = 0;
  double type2 = 0;
};

/// Points for +inf, every distinct score in decreasing order, then -inf.
/// type1 is non-increasing and type2 non-decreasing along the curve.
std::vector<RocPoint> roc_curve(std::span<const Scored> scored);

struct EqualError {
  double rate = 0;       // fraction in [0, 1]
  double threshold = 0;  // operating threshold at the crossing
};

/// Crossing of type1 and type2 along the curve, interpolated linearly between
/// the two bracketing points unless a point attains it exactly. The threshold
/// is interpolated the same way; when one bracket is infinite the finite one
/// is used.
EqualError equal_error(const std::vector<RocPoint>& roc);

/// EER in percent.
double compute_eer(const std::vector<RocPoint>& roc);
double compute_eer(std::span<const Scored> scored);

}  // namespace keydyn
