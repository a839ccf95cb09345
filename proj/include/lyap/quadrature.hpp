#pragma once

// Nested contour integral for the joint moment of the flat instance,
//
//   E[prod_k Z_T(t, u_k)] = (2 pi i)^-nu  int ... int  prod_{A<B} (z_A - z_B)/(z_A - z_B - 1)
//                           * exp(sum_j T t z_j^2/2 + T u_j z_j) dz_1 ... dz_nu,
//
// with z_j on the vertical line a_j + iR and a_j - a_{j+1} > 1. Substituting
// z_j = a_j + i y_j turns it into a real integral over y in R^nu with Gaussian
// damping exp(-T t y_j^2/2), which is truncated to [-Y, Y] per axis and summed
// on a tensor grid.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "lyap/error.hpp"
#include "lyap/instance.hpp"
#include "lyap/variational.hpp"

namespace lyap {

constexpr int kMaxContourNu = 3;
constexpr int kMinQuadraturePoints = 8;

enum class QuadratureRule { GaussLegendre, Trapezoid };

struct ContourConfig {
  std::vector<double> offsets;  // strictly decreasing, consecutive gaps > 1
  double truncation = 1.0;      // Y
  int points = 200;             // per axis
  QuadratureRule rule = QuadratureRule::GaussLegendre;
  unsigned threads = 1;
};

struct ContourResult {
  double value = 0.0;
  double imag = 0.0;
};

struct QuadratureGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline double heat_kernel(double time, double space) {
  if (!(time > 0.0)) {
    throw Error(ErrorCode::NonPositiveTime, "heat kernel needs positive time");
  }
  return std::exp(-space * space / (2.0 * time)) / std::sqrt(2.0 * std::numbers::pi * time);
}

/// Gauss-Legendre rule on [lo, hi] by Newton iteration on the three-term recurrence.
inline QuadratureGrid gauss_legendre(int points, double lo, double hi) {
  if (points < 1) throw Error(ErrorCode::InvalidArgument, "need at least one node");
  const auto n = static_cast<std::size_t>(points);
  QuadratureGrid grid{std::vector<double>(n), std::vector<double>(n)};
  const double mid = 0.5 * (hi + lo);
  const double half = 0.5 * (hi - lo);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (points + 0.5));
    double derivative = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 1; j <= points; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
      }
      derivative = points * (x * p0 - p1) / (x * x - 1.0);
      const double step = p0 / derivative;
      x -= step;
      if (std::abs(step) <= 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);
    grid.nodes[i] = mid - half * x;
    grid.nodes[n - 1 - i] = mid + half * x;
    grid.weights[i] = half * w;
    grid.weights[n - 1 - i] = half * w;
  }
  return grid;
}

inline QuadratureGrid trapezoid_grid(int points, double lo, double hi) {
  if (points < 2) throw Error(ErrorCode::InvalidArgument, "trapezoid needs two nodes");
  const auto n = static_cast<std::size_t>(points);
  QuadratureGrid grid{std::vector<double>(n), std::vector<double>(n)};
  const double h = (hi - lo) / (points - 1);
  for (std::size_t i = 0; i < n; ++i) {
    grid.nodes[i] = lo + h * static_cast<double>(i);
    grid.weights[i] = (i == 0 || i + 1 == n) ? 0.5 * h : h;
  }
  return grid;
}

inline void check_contour_offsets(std::span<const double> offsets) {
  for (std::size_t k = 0; k + 1 < offsets.size(); ++k) {
    if (!(offsets[k] - offsets[k + 1] > 1.0)) {
      throw Error(ErrorCode::InvalidContour, "contour offsets need gaps > 1 (gap " +
                                                 std::to_string(k) + " is " +
                                                 std::to_string(offsets[k] - offsets[k + 1]) + ")");
    }
  }
}

/// Offsets built from the flat minimizer a*: each gap widened by 1/nu, centroid kept.
inline std::vector<double> default_offsets(const FlatInstance& flat, double t) {
  const auto sol = solve_gamma1(flat, t);
  const double nu = static_cast<double>(flat.u.size());
  std::vector<double> offsets(sol.values.size());
  for (std::size_t k = 0; k < offsets.size(); ++k) {
    offsets[k] = sol.values[k] + (0.5 * (nu + 1.0) - static_cast<double>(k + 1)) / nu;
  }
  return offsets;
}

inline int default_points(int nu) { return nu <= 2 ? 200 : 96; }

/// Default configuration: offsets from a*, Y = sigmas / sqrt(T t).
inline ContourConfig default_contour(const MomentInstance& inst, double T, double sigmas = 8.0,
                                     int points = 0) {
  const auto flat = flatten(inst);
  ContourConfig cfg;
  cfg.offsets = default_offsets(flat, inst.t);
  cfg.truncation = sigmas / std::sqrt(T * inst.t);
  cfg.points = points > 0 ? points : default_points(flat.nu);
  return cfg;
}

namespace detail {

inline std::complex<double> pairwise_sum(std::span<const std::complex<double>> terms) {
  if (terms.empty()) return {0.0, 0.0};
  if (terms.size() == 1) return terms[0];
  const std::size_t half = terms.size() / 2;
  return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

}  // namespace detail

inline ContourResult contour_moment_detailed(double T, const MomentInstance& inst,
                                             const ContourConfig& cfg) {
  if (!(T > 0.0)) throw Error(ErrorCode::NonPositiveTime, "T must be positive");
  const auto flat = flatten(inst);
  const int nu = flat.nu;
  if (nu > kMaxContourNu) {
    throw Error(ErrorCode::NuTooLarge, "contour quadrature supports nu <= " +
                                           std::to_string(kMaxContourNu) + ", got " +
                                           std::to_string(nu));
  }
  if (cfg.offsets.size() != static_cast<std::size_t>(nu)) {
    throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(nu) + " contour offsets");
  }
  check_contour_offsets(cfg.offsets);
  if (!(cfg.truncation > 0.0) || cfg.points < kMinQuadraturePoints) {
    throw Error(ErrorCode::InvalidArgument, "truncation must be positive and points >= " +
                                                std::to_string(kMinQuadraturePoints));
  }

  const double t = inst.t;
  const double Y = cfg.truncation;
  const auto grid = cfg.rule == QuadratureRule::GaussLegendre ? gauss_legendre(cfg.points, -Y, Y)
                                                              : trapezoid_grid(cfg.points, -Y, Y);
  const std::size_t P = grid.nodes.size();
  const auto& a = cfg.offsets;

  // Per-axis factor w_g exp(-T t y^2/2 + i (T t a_j + T u_j) y); the real
  // exponent sum_j T t a_j^2/2 + T u_j a_j is pulled out of the sum.
  double log_scale = 0.0;
  std::vector<std::vector<std::complex<double>>> axis(static_cast<std::size_t>(nu),
                                                      std::vector<std::complex<double>>(P));
  for (std::size_t j = 0; j < axis.size(); ++j) {
    log_scale += T * t * a[j] * a[j] / 2.0 + T * flat.u[j] * a[j];
    const double freq = T * t * a[j] + T * flat.u[j];
    for (std::size_t g = 0; g < P; ++g) {
      const double y = grid.nodes[g];
      axis[j][g] = grid.weights[g] * std::exp(-T * t * y * y / 2.0) *
                   std::polar(1.0, freq * y);
    }
  }

  auto cross = [&](std::size_t A, std::size_t B, double yA, double yB) {
    const std::complex<double> diff(a[A] - a[B], yA - yB);
    return diff / (diff - 1.0);
  };

  // One slice per node of the first axis, summed in fixed order.
  std::vector<std::complex<double>> slices(P);
  auto fill = [&](std::size_t g0) {
    const double y0 = grid.nodes[g0];
    std::complex<double> acc{0.0, 0.0};
    if (nu == 1) {
      acc = axis[0][g0];
    } else if (nu == 2) {
      for (std::size_t g1 = 0; g1 < P; ++g1) {
        acc += axis[0][g0] * axis[1][g1] * cross(0, 1, y0, grid.nodes[g1]);
      }
    } else {
      for (std::size_t g1 = 0; g1 < P; ++g1) {
        const double y1 = grid.nodes[g1];
        const auto outer = axis[0][g0] * axis[1][g1] * cross(0, 1, y0, y1);
        std::complex<double> inner{0.0, 0.0};
        for (std::size_t g2 = 0; g2 < P; ++g2) {
          const double y2 = grid.nodes[g2];
          inner += axis[2][g2] * cross(0, 2, y0, y2) * cross(1, 2, y1, y2);
        }
        acc += outer * inner;
      }
    }
    slices[g0] = acc;
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(P)));
  if (workers == 1) {
    for (std::size_t g0 = 0; g0 < P; ++g0) fill(g0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t g0 = w; g0 < P; g0 += workers) fill(g0);
      });
    }
  }

  const auto total = detail::pairwise_sum(slices) * std::exp(log_scale) /
                     std::pow(2.0 * std::numbers::pi, nu);
  return ContourResult{total.real(), total.imag()};
}

inline double contour_moment(double T, const MomentInstance& inst, const ContourConfig& cfg) {
  return contour_moment_detailed(T, inst, cfg).value;
}

inline double lyapunov_rate_estimate(double T, const MomentInstance& inst, const ContourConfig& cfg) {
  const double moment = contour_moment(T, inst, cfg);
  if (!(moment > 0.0)) {
    throw Error(ErrorCode::NonPositiveMoment,
                "quadrature returned a non-positive moment; increase resolution");
  }
  return std::log(moment) / T;
}

/// Triangle-inequality bound on the contour integral at offsets a.
inline double upper_bound_value(double T, const FlatInstance& flat, double t,
                                std::span<const double> a) {
  if (a.size() != flat.u.size()) {
    throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(flat.u.size()) + " offsets");
  }
  check_contour_offsets(a);
  const double nu = static_cast<double>(a.size());
  double log_value = -0.5 * nu * std::log(2.0 * std::numbers::pi * T * t);
  for (std::size_t A = 0; A < a.size(); ++A) {
    log_value += T * t * a[A] * a[A] / 2.0 + T * flat.u[A] * a[A];
    for (std::size_t B = A + 1; B < a.size(); ++B) {
      const double diff = a[A] - a[B];
      log_value += std::log(std::abs(diff / (diff - 1.0)));
    }
  }
  return std::exp(log_value);
}

}  // namespace lyap
