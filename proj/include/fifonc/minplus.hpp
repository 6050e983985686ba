#pragma once

// Min-plus operations on the curve types. Every function is pure.
// Deviations and a* return kInf instead of throwing when the curves diverge.

#include <vector>

#include "fifonc/curve.hpp"

namespace fifonc {

// Pointwise sum for t > 0 (0 at t = 0), in normal form.
ConcaveCurve add_concave(const ConcaveCurve& f, const ConcaveCurve& g);
// Sum of many curves in one sweep; zero curve for an empty list.
ConcaveCurve sum_concave(const std::vector<ConcaveCurve>& curves);

// inf{t >= 0 | f(t) >= x}. The piecewise overload throws ContractError when
// f is decreasing anywhere.
Time pseudo_inverse(const ConvexCurve& f, Data x);
Time pseudo_inverse(const PiecewiseCurve& f, Data x);

// h(f, g) = sup_t inf{d >= 0 | f(t) <= g(t + d)}, scanned over the candidate
// set A ∪ {f^-1(g(s)) | s in B} with right limits.
Time horizontal_deviation(const ConcaveCurve& f, const ConvexCurve& g);
// h(f + gamma_{extra_rate,0}, g) without building the sum.
Time horizontal_deviation(const ConcaveCurve& f, Rate extra_rate, const ConvexCurve& g);

// v(f, g) = sup_t {f(t) - g(t)}, scanned over the union of breakpoints using
// both one-sided limits at each candidate.
Data vertical_deviation(const ConcaveCurve& f, const PiecewiseCurve& g);
Data vertical_deviation(const ConcaveCurve& f, const ConvexCurve& g);

// Largest non-decreasing function below g: t -> inf_{s >= t} g(s).
PiecewiseCurve lower_nondecreasing_closure(const PiecewiseCurve& g);

// (f ⊗ δ_T)(t): f(t - T) for t >= T, 0 before.
PiecewiseCurve shift_by_impulse(const ConcaveCurve& f, Time shift);

// First i in A ∪ {f^-1(g(s))} with r^i <= R^{g^-1(f(i))}.
Time a_star(const ConcaveCurve& f, const ConvexCurve& g);

}  // namespace fifonc
