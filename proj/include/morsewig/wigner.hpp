#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "morsewig/states.hpp"

namespace morsewig {

enum class WignerMethod { closed_form, quadrature };
enum class BesselScaling { direct, log_scaled };

struct WignerConfig {
  WignerMethod method = WignerMethod::closed_form;
  double bessel_rel_tol = 1e-10;
  /// Half-width Y of the y window of the direct integral; derived from the
  /// state's support when empty.
  std::optional<double> quad_window;
  int quad_points = 2048;
  BesselScaling scaling = BesselScaling::log_scaled;

  /// Throws DomainError on out-of-range settings.
  void validate() const;
};

struct GridSpec {
  double x_min = 0.0;
  double x_max = 1.0;
  int nx = 2;
  double p_min = -1.0;
  double p_max = 1.0;
  int np = 2;

  void validate() const;
  double x_at(int i) const;
  double p_at(int j) const;
  double dx() const { return (x_max - x_min) / (nx - 1); }
  double dp() const { return (p_max - p_min) / (np - 1); }
};

/// Wigner values on a rectangular lattice. values[i * np + j] = W(x_i, p_j).
struct PhaseSpaceGrid {
  GridSpec spec;
  std::vector<double> values;
  std::map<std::string, std::string> meta;

  double at(int i, int j) const {
    return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(spec.np) +
                  static_cast<std::size_t>(j)];
  }
};

/// Bilinear Bessel-kernel formula for an arbitrary bound state.
double wigner_point_closed(const BoundState& state, double x, double p,
                           const WignerConfig& cfg = {});

/// The closed-form double sum before its real part is taken; the imaginary
/// part is the realness residual that wigner_point_closed checks.
Complex wigner_closed_sum(const BoundState& state, double x, double p,
                          const WignerConfig& cfg = {});

/// Direct integral (1 / 2 pi hbar) int e^{-ipy/hbar} Psi*(x - y/2)
/// Psi(x + y/2) dy by the trapezoid rule.
double wigner_point_quadrature(const BoundState& state, double x, double p,
                               const WignerConfig& cfg = {});

/// Dispatches on cfg.method.
double wigner_point(const BoundState& state, double x, double p,
                    const WignerConfig& cfg = {});

/// Fills a lattice; columns run in parallel, results do not depend on the
/// schedule and equal the corresponding point evaluations bit for bit.
PhaseSpaceGrid wigner_grid(const BoundState& state, const GridSpec& spec,
                           const WignerConfig& cfg = {});

/// Lattice bounds that contain the support of the state's Wigner function
/// to 1e-12 of its peak. Throws CoverageError if expansion does not settle.
GridSpec auto_window(const BoundState& state, int nx, int np,
                     const WignerConfig& cfg = {});

/// Largest boundary |W| relative to the largest |W| of the grid.
double boundary_ratio(const PhaseSpaceGrid& grid);

/// Throws CoverageError when boundary_ratio exceeds max_ratio.
void check_coverage(const PhaseSpaceGrid& grid, double max_ratio = 1e-12);

/// Trapezoid estimate of the integral of W over the grid.
double normalization(const PhaseSpaceGrid& grid, double max_ratio = 1e-12);

/// Trapezoid integral over p for every x column.
std::vector<double> marginal_x(const PhaseSpaceGrid& grid,
                               double max_ratio = 1e-12);

struct Negativity {
  double min_value;
  double min_x;
  double min_p;
  double negative_volume;
};

Negativity negativity(const PhaseSpaceGrid& grid);

}  // namespace morsewig
