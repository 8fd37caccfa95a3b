#include "ponomarev/sequence.hpp"

#include <cmath>
#include <limits>

#include "ponomarev/errors.hpp"

namespace ponomarev {

double ulp_distance(double x, double y) {
  double ay = std::abs(y);
  double ulp = std::nextafter(ay, std::numeric_limits<double>::infinity()) - ay;
  return std::abs(x - y) / ulp;
}

SequencePack::SequencePack(int n, std::vector<double> a, std::vector<double> b,
                           bool standard)
    : n_(n), standard_(standard), a_(std::move(a)), b_(std::move(b)) {
  if (n < 1 || n > 32) throw ConstructionError("pack: n must be in [1, 32]");
  if (a_.size() < 2) throw ConstructionError("pack: depth must be >= 1");
  if (a_.size() != b_.size())
    throw ConstructionError("pack: a and b differ in length");
  const int K = depth();
  r_.resize(K + 1);
  rt_.resize(K + 1);
  alpha_.assign(K + 1, 0.0);
  beta_.assign(K + 1, 0.0);
  for (int k = 0; k <= K; ++k) {
    r_[k] = std::ldexp(a_[k], -k);
    rt_[k] = std::ldexp(b_[k], -k);
  }
  for (int k = 1; k <= K; ++k) {
    // r_{k-1}/2 - r_k = 2^-k (a_{k-1} - a_k), likewise for rt.
    double da = a_[k - 1] - a_[k];
    double db = standard_ ? 0.5 * da : b_[k - 1] - b_[k];
    alpha_[k] = db / da;
    beta_[k] = rt_[k] - alpha_[k] * r_[k];
  }
}

SequencePack SequencePack::standard(int n, std::vector<double> a) {
  std::vector<double> b(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) b[k] = 0.5 * (1.0 + a[k]);
  SequencePack p(n, std::move(a), std::move(b), true);
  if (auto v = p.first_violation(); !v.empty()) throw ConstructionError(v);
  return p;
}

SequencePack SequencePack::custom(int n, std::vector<double> a,
                                  std::vector<double> b) {
  SequencePack p(n, std::move(a), std::move(b), false);
  if (auto v = p.first_violation(); !v.empty()) throw ConstructionError(v);
  return p;
}

SequencePack SequencePack::reciprocal(int n, int depth) {
  std::vector<double> a(depth + 1);
  for (int k = 0; k <= depth; ++k) a[k] = 1.0 / (k + 1);
  return standard(n, std::move(a));
}

SequencePack SequencePack::identity(int n, int depth) {
  std::vector<double> a(depth + 1);
  for (int k = 0; k <= depth; ++k) a[k] = 1.0 / (k + 1);
  return custom(n, a, a);
}

SequencePack SequencePack::prefix(int k) const {
  if (k < 1 || k > depth()) throw DepthError("pack: prefix depth out of range");
  SequencePack p = *this;
  for (auto* v : {&p.a_, &p.b_, &p.r_, &p.rt_, &p.alpha_, &p.beta_})
    v->resize(k + 1);
  return p;
}

SequencePack SequencePack::with_alpha_offset(int k, double delta) const {
  SequencePack p = *this;
  p.alpha_.at(k) += delta;
  return p;
}

SequencePack::Residual SequencePack::gluing_residual(int k) const {
  double inner = alpha_.at(k) * r_[k] + beta_[k];
  double outer = alpha_[k] * (0.5 * r_[k - 1]) + beta_[k];
  return {ulp_distance(inner, rt_[k]), ulp_distance(outer, 0.5 * rt_[k - 1])};
}

double SequencePack::max_gluing_residual_ulps() const {
  double worst = 0.0;
  for (int k = 1; k <= depth(); ++k) {
    auto res = gluing_residual(k);
    worst = std::max({worst, res.inner_ulps, res.outer_ulps});
  }
  return worst;
}

std::string SequencePack::first_violation(double max_gluing_ulps) const {
  auto at = [](int k) { return " at k = " + std::to_string(k); };
  if (a_[0] != 1.0 || b_[0] != 1.0) return "pack: a_0 and b_0 must equal 1";
  for (int k = 1; k <= depth(); ++k) {
    if (!(a_[k] > 0.0) || !(b_[k] > 0.0) || !std::isfinite(a_[k]) ||
        !std::isfinite(b_[k]))
      return "pack: a_k, b_k must be finite and positive" + at(k);
    if (!(r_[k] > 0.0))
      return "pack: r_k underflows to zero" + at(k);
    if (!(r_[k] < 0.5 * r_[k - 1]))
      return "pack: domain cubes not strictly nested (a_k >= a_{k-1})" + at(k);
    // Standard packs have b_{k-1} - b_k = (a_{k-1} - a_k)/2 > 0 exactly, but
    // b_k rounds to 1/2 once a_k drops below 2^-53, so only the stored order
    // is checked for them.
    if (standard_ ? !(rt_[k] <= 0.5 * rt_[k - 1]) : !(rt_[k] < 0.5 * rt_[k - 1]))
      return "pack: target cubes not strictly nested (b_k >= b_{k-1})" + at(k);
    if (!(alpha_[k] > 0.0))
      return "pack: alpha_k must be positive" + at(k);
    auto res = gluing_residual(k);
    if (!(res.inner_ulps <= max_gluing_ulps && res.outer_ulps <= max_gluing_ulps))
      return "pack: gluing residual above " + std::to_string(max_gluing_ulps) +
             " ulps" + at(k);
  }
  return {};
}

void SequencePack::validate(double max_gluing_ulps) const {
  if (auto v = first_violation(max_gluing_ulps); !v.empty())
    throw ConstructionError(v);
}

}  // namespace ponomarev
