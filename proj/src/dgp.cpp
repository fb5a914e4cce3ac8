#include "avi/dgp.hpp"

#include <cmath>
#include <stdexcept>

namespace avi {

CitDgp::CitDgp(std::size_t d, double rho) : d_(d), rho_(rho) {
  if (d < 1) throw std::invalid_argument("CitDgp: d must be >= 1");
  if (!std::isfinite(rho)) throw std::invalid_argument("CitDgp: rho must be finite");
  inv_sqrt_d_ = 1.0 / std::sqrt(static_cast<double>(d));
}

CitDgp CitDgp::from_name(std::string_view name, std::size_t d, double rho) {
  if (name == "cit-null") return CitDgp(d, 0.0);
  if (name == "cit-alt") return CitDgp(d, rho);
  throw std::invalid_argument("unknown DGP '" + std::string(name) +
                              "' (expected cit-null or cit-alt)");
}

std::vector<std::string> CitDgp::names() { return {"cit-null", "cit-alt"}; }

double CitDgp::index(std::span<const double> z) const {
  if (z.size() != d_) throw std::invalid_argument("CitDgp: z has the wrong dimension");
  double s = 0.0;
  for (double v : z) s += v;
  return s * inv_sqrt_d_;
}

double CitDgp::mean_x(std::span<const double> z) const { return std::sin(2.0 * index(z)); }

double CitDgp::mean_y(std::span<const double> z) const {
  const double s = index(z);
  return 0.5 * s * s;
}

void CitDgp::sample(Engine& engine, Triplet& out) const {
  out.z.resize(d_);
  double s = 0.0;
  for (auto& v : out.z) {
    v = standard_normal(engine);
    s += v;
  }
  s *= inv_sqrt_d_;
  const double ex = standard_normal(engine);
  const double ey = standard_normal(engine);
  out.x = std::sin(2.0 * s) + ex;
  out.y = 0.5 * s * s + ey + rho_ * ex;
}

Triplet CitDgp::sample(Engine& engine) const {
  Triplet t;
  sample(engine, t);
  return t;
}

}  // namespace avi
