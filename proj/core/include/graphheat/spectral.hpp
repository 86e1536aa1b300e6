#pragma once

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "graphheat/graph.hpp"

namespace graphheat {

// Lumped linear finite elements on a metric graph: stiffness K, diagonal mass w.
// Dirichlet vertices are eliminated; Kirchhoff coupling is the natural condition.
class SpectralModel {
 public:
  double mesh() const { return h_; }
  std::size_t node_count() const { return static_cast<std::size_t>(weights_.size()); }
  const Eigen::SparseMatrix<double>& stiffness() const { return K_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const std::vector<std::size_t>& segments() const { return segments_; }
  double volume() const { return volume_; }

  bool has_dense_spectrum() const { return node_count() <= kDenseLimit; }
  // Ascending eigenvalues and squared projections of the constant function, computed once.
  const Eigen::VectorXd& eigenvalues() const;
  const Eigen::VectorXd& mass_coefficients() const;

  static constexpr std::size_t kDenseLimit = 3000;

 private:
  friend SpectralModel build(const MetricGraph& g, const std::vector<std::size_t>& segments);
  struct Spectrum;

  double h_ = 0.0;
  double volume_ = 0.0;
  std::vector<std::size_t> segments_;
  Eigen::SparseMatrix<double> K_;
  Eigen::VectorXd weights_;
  std::shared_ptr<Spectrum> spectrum_;
};

// Requires h < l_min / 4; each edge gets ceil(l_e / h) segments.
SpectralModel build(const MetricGraph& g, double h);
// Explicit segment count per edge, at least 4 each.
SpectralModel build(const MetricGraph& g, const std::vector<std::size_t>& segments);

// k_max = 0 keeps every mode; otherwise the lowest k_max.
double eigen_heat_content(const SpectralModel& m, double t, std::size_t k_max = 0);
// Crank-Nicolson with step-doubling control of the L1 mass.
double stepper_heat_content(const SpectralModel& m, double t, double rtol = 1e-11);
// Values at an increasing list of times from a single integration.
std::vector<double> stepper_heat_content(const SpectralModel& m, const std::vector<double>& times,
                                         double rtol = 1e-11);
double lambda1(const SpectralModel& m);
double torsional_rigidity(const SpectralModel& m);
// (Q_2t, squared L2 norm of the solution at t), both from the stepper.
std::pair<double, double> l2_mass_identity(const SpectralModel& m, double t, double rtol = 1e-12);
// Least-squares slope of -log Q_t against t over the grid.
double large_time_rate(const SpectralModel& m, const std::vector<double>& t_grid);

enum class ClosedFamily { IntervalMixed, IntervalDirichlet, StarAllDirichlet, PumpkinChain, MirroredHalfStar };

struct ClosedForm {
  ClosedFamily family = ClosedFamily::IntervalMixed;
  double ell = 1.0;
  int n = 1;          // star arms, pumpkin multiplicity m, or half-star m
  int dirichlet = 1;  // Dirichlet ends of a pumpkin chain (1 or 2)
};

double closed_form_heat_content(const ClosedForm& form, double t);

}  // namespace graphheat
