#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "avi/random.hpp"
#include "avi/seq_gcm.hpp"

namespace avi {

// Triplet generators for conditional-independence experiments.
//
//   cit-null  Z ~ N(0, I_d), s = (z_1 + ... + z_d) / sqrt(d),
//             X = sin(2 s) + e_x,  Y = s^2 / 2 + e_y
//   cit-alt   as cit-null with Y = s^2 / 2 + e_y + rho * e_x
//
// with e_x, e_y ~ N(0, 1) independent of Z and of each other. Under cit-alt
// E[(X - E[X|Z]) (Y - E[Y|Z]) | Z] = rho. Each draw consumes d + 2 normals in
// the order z, e_x, e_y regardless of rho, so rho = 0 reproduces cit-null
// path for path.
class CitDgp {
 public:
  /// Throws std::invalid_argument unless d >= 1 and rho is finite.
  CitDgp(std::size_t d, double rho);

  /// "cit-null" (rho ignored) or "cit-alt". Throws std::invalid_argument for
  /// other names.
  static CitDgp from_name(std::string_view name, std::size_t d, double rho = 0.5);
  static std::vector<std::string> names();

  std::size_t dim() const { return d_; }
  double rho() const { return rho_; }

  /// Overwrites `out`, reusing its storage.
  void sample(Engine& engine, Triplet& out) const;
  Triplet sample(Engine& engine) const;

  /// True conditional means E[X | Z = z] and E[Y | Z = z].
  double mean_x(std::span<const double> z) const;
  double mean_y(std::span<const double> z) const;

 private:
  double index(std::span<const double> z) const;

  std::size_t d_;
  double rho_;
  double inv_sqrt_d_;
};

}  // namespace avi
