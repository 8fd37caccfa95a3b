#include "ponomarev/mapping.hpp"

#include <cmath>

#include "ponomarev/errors.hpp"

namespace ponomarev {

namespace {

constexpr double kRidgeTolerance = 1e-12;

struct SupNorm {
  double value;
  int argmax;
  double runner_up;
};

SupNorm sup_norm(const Point& d) {
  SupNorm s{-1.0, -1, -1.0};
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    double v = std::abs(d[i]);
    if (v > s.value) {
      s.runner_up = s.value;
      s.value = v;
      s.argmax = static_cast<int>(i);
    } else if (v > s.runner_up) {
      s.runner_up = v;
    }
  }
  return s;
}

}  // namespace

PonomarevMap::PonomarevMap(SequencePack pack, std::string provenance)
    : pack_(std::move(pack)),
      provenance_(std::move(provenance)),
      truncation_error_(2.0 * std::sqrt(double(pack_.dimension())) *
                        pack_.rt(pack_.depth())) {}

PonomarevMap PonomarevMap::build(SequencePack pack, std::string provenance) {
  pack.validate();
  return PonomarevMap(std::move(pack), std::move(provenance));
}

PonomarevMap PonomarevMap::truncated(int depth) const {
  return PonomarevMap(pack_.prefix(depth), provenance_);
}

PonomarevMap::Descent PonomarevMap::descend(const Point& p, Side side) const {
  const int n = dimension();
  if (p.size() != n) throw DomainError("point has wrong dimension");
  if (!p.allFinite() || p.cwiseAbs().maxCoeff() > 1.0)
    throw DomainError("point outside [-1,1]^n");

  Descent d{{Region::core, VertexWord(n)}, Point::Zero(n), Point::Zero(n)};
  const Point& here = side == Side::domain ? d.z : d.zt;
  for (int k = 1; k <= depth(); ++k) {
    const auto m = child_mask(p, here);
    const double step = 0.5 * pack_.r(k - 1);
    const double step_t = 0.5 * pack_.rt(k - 1);
    for (int c = 0; c < n; ++c) {
      const bool plus = (m >> c) & 1u;
      d.z[c] += plus ? step : -step;
      d.zt[c] += plus ? step_t : -step_t;
    }
    d.location.word.push_back(m);
    const double radius = side == Side::domain ? pack_.r(k) : pack_.rt(k);
    if ((p - here).cwiseAbs().maxCoeff() > radius) {
      d.location.region = Region::annulus;
      return d;
    }
  }
  return d;
}

Evaluation PonomarevMap::eval_detailed(const Point& x) const {
  auto d = descend(x, Side::domain);
  const int k = d.location.depth();
  Point diff = x - d.z;
  if (d.location.region == Region::annulus) {
    const double m = diff.cwiseAbs().maxCoeff();
    const double scale = (pack_.alpha(k) * m + pack_.beta(k)) / m;
    return {d.zt + scale * diff, std::move(d.location)};
  }
  return {d.zt + (pack_.rt(k) / pack_.r(k)) * diff, std::move(d.location)};
}

Point PonomarevMap::eval(const Point& x) const { return eval_detailed(x).image; }

Evaluation PonomarevMap::eval_inverse_detailed(const Point& y) const {
  auto d = descend(y, Side::target);
  const int k = d.location.depth();
  Point diff = y - d.zt;
  if (d.location.region == Region::annulus) {
    const double s_t = diff.cwiseAbs().maxCoeff();
    const double s = (s_t - pack_.beta(k)) / pack_.alpha(k);
    return {d.z + (s / s_t) * diff, std::move(d.location)};
  }
  return {d.z + (pack_.r(k) / pack_.rt(k)) * diff, std::move(d.location)};
}

Point PonomarevMap::eval_inverse(const Point& y) const {
  return eval_inverse_detailed(y).image;
}

Derivative PonomarevMap::derivative(const Point& x) const {
  auto d = descend(x, Side::domain);
  const int n = dimension();
  const int k = d.location.depth();
  if (d.location.region == Region::core) {
    return {(pack_.rt(k) / pack_.r(k)) * Eigen::MatrixXd::Identity(n, n),
            Region::core, k, -1};
  }
  Point diff = x - d.z;
  auto s = sup_norm(diff);
  if (s.value - s.runner_up <= kRidgeTolerance * s.value)
    throw RidgeSetError("derivative: sup-norm argmax not unique");
  const double alpha = pack_.alpha(k), beta = pack_.beta(k), m = s.value;
  const int j = s.argmax;
  const double sj = diff[j] > 0 ? 1.0 : -1.0;
  Eigen::MatrixXd D = (alpha + beta / m) * Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) D(i, j) -= beta * diff[i] * sj / (m * m);
  return {std::move(D), Region::annulus, k, j};
}

double PonomarevMap::jacobian_det(const Point& x) const {
  auto d = descend(x, Side::domain);
  const int n = dimension();
  const int k = d.location.depth();
  if (d.location.region == Region::core)
    return std::pow(pack_.rt(k) / pack_.r(k), n);
  auto s = sup_norm(x - d.z);
  if (s.value - s.runner_up <= kRidgeTolerance * s.value)
    throw RidgeSetError("jacobian_det: sup-norm argmax not unique");
  const double alpha = pack_.alpha(k);
  return alpha * std::pow(alpha + pack_.beta(k) / s.value, n - 1);
}

double PonomarevMap::gradient_magnitude(const Point& x) const {
  auto d = descend(x, Side::domain);
  const int k = d.location.depth();
  if (d.location.region == Region::core) return pack_.rt(k) / pack_.r(k);
  const double m = (x - d.z).cwiseAbs().maxCoeff();
  return pack_.alpha(k) + pack_.beta(k) / m;
}

Point PonomarevMap::annulus_image(const VertexWord& word, const Point& x) const {
  const int k = word.depth();
  if (k < 1) throw DepthError("annulus_image: word depth must be >= 1");
  Point diff = x - center(word, pack_, Side::domain);
  const double m = diff.cwiseAbs().maxCoeff();
  return center(word, pack_, Side::target) +
         ((pack_.alpha(k) * m + pack_.beta(k)) / m) * diff;
}

Point PonomarevMap::core_image(const VertexWord& word, const Point& x) const {
  const int k = word.depth();
  return center(word, pack_, Side::target) +
         (pack_.rt(k) / pack_.r(k)) * (x - center(word, pack_, Side::domain));
}

}  // namespace ponomarev
