#include "graphheat/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <Eigen/SparseCholesky>
#include <lapacke.h>

#include "graphheat/errors.hpp"

namespace graphheat {

struct SpectralModel::Spectrum {
  std::once_flag once;
  Eigen::VectorXd values;
  Eigen::VectorXd coefficients;
};

SpectralModel build(const MetricGraph& g, double h) {
  g.require_valid();
  if (!(h > 0.0) || !(h < 0.25 * g.min_length())) throw DomainError("mesh too coarse: need h < l_min / 4");
  std::vector<std::size_t> segments;
  for (const Edge& e : g.edges()) segments.push_back(static_cast<std::size_t>(std::ceil(e.length / h)));
  return build(g, segments);
}

SpectralModel build(const MetricGraph& g, const std::vector<std::size_t>& segments) {
  g.require_valid();
  if (segments.size() != g.edge_count()) throw DomainError("one segment count per edge required");
  SpectralModel m;
  m.segments_ = segments;
  m.volume_ = g.volume();

  std::vector<std::ptrdiff_t> vertex_node(g.vertex_count(), -1);
  std::ptrdiff_t n = 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (!g.is_dirichlet(v)) vertex_node[v] = n++;
  std::vector<std::ptrdiff_t> first_interior(g.edge_count());
  for (const Edge& e : g.edges()) {
    if (segments[e.id] < 4) throw DomainError("mesh too coarse: at least 4 segments per edge");
    first_interior[e.id] = n;
    n += static_cast<std::ptrdiff_t>(segments[e.id]) - 1;
  }

  std::vector<Eigen::Triplet<double>> entries;
  m.weights_ = Eigen::VectorXd::Zero(n);
  for (const Edge& e : g.edges()) {
    const auto N = static_cast<std::ptrdiff_t>(segments[e.id]);
    const double he = e.length / static_cast<double>(N);
    m.h_ = std::max(m.h_, he);
    auto node = [&](std::ptrdiff_t j) {
      if (j == 0) return vertex_node[e.u];
      if (j == N) return vertex_node[e.v];
      return first_interior[e.id] + j - 1;
    };
    for (std::ptrdiff_t j = 0; j < N; ++j) {
      const std::ptrdiff_t a = node(j), b = node(j + 1);
      const double k = 1.0 / he;
      if (a >= 0) {
        entries.emplace_back(a, a, k);
        m.weights_[a] += 0.5 * he;
      }
      if (b >= 0) {
        entries.emplace_back(b, b, k);
        m.weights_[b] += 0.5 * he;
      }
      if (a >= 0 && b >= 0) {
        entries.emplace_back(a, b, -k);
        entries.emplace_back(b, a, -k);
      }
    }
  }
  m.K_.resize(n, n);
  m.K_.setFromTriplets(entries.begin(), entries.end());
  m.K_.makeCompressed();
  m.spectrum_ = std::make_shared<SpectralModel::Spectrum>();
  return m;
}

const Eigen::VectorXd& SpectralModel::eigenvalues() const {
  if (!has_dense_spectrum()) throw DomainError("too many nodes for the dense eigensolver; use the stepper");
  std::call_once(spectrum_->once, [this] {
    const Eigen::VectorXd root_w = weights_.cwiseSqrt();
    const Eigen::VectorXd scale = root_w.cwiseInverse();
    Eigen::MatrixXd A = scale.asDiagonal() * Eigen::MatrixXd(K_) * scale.asDiagonal();
    const auto n = static_cast<lapack_int>(A.rows());
    Eigen::VectorXd values(n);
    Eigen::MatrixXd vectors(n, n);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    lapack_int found = 0;
    // MRRR; several times faster than Eigen's QR iteration once eigenvectors are needed.
    const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'A', 'L', n, A.data(), n, 0.0, 0.0, 0, 0,
                                           0.0, &found, values.data(), vectors.data(), n, support.data());
    if (info != 0 || found != n) throw std::runtime_error("eigensolver failed to converge");
    spectrum_->values = values;
    spectrum_->coefficients = (vectors.transpose() * root_w).array().square();
  });
  return spectrum_->values;
}

const Eigen::VectorXd& SpectralModel::mass_coefficients() const {
  eigenvalues();
  return spectrum_->coefficients;
}

double eigen_heat_content(const SpectralModel& m, double t, std::size_t k_max) {
  if (!(t > 0.0)) throw DomainError("t must be positive");
  const Eigen::VectorXd& lambda = m.eigenvalues();
  const Eigen::VectorXd& c = m.mass_coefficients();
  const auto n = static_cast<std::ptrdiff_t>(k_max == 0 ? lambda.size() : std::min<std::size_t>(k_max, lambda.size()));
  // Summing from the top keeps the dominant low modes for last.
  double q = 0.0;
  for (std::ptrdiff_t k = n - 1; k >= 0; --k) q += std::exp(-lambda[k] * t) * c[k];
  return q;
}

namespace {

class CrankNicolson {
 public:
  explicit CrankNicolson(const SpectralModel& m) : m_(m) {}

  Eigen::VectorXd step(const Eigen::VectorXd& u, double dt) {
    const Eigen::VectorXd rhs = m_.weights().cwiseProduct(u) - 0.5 * dt * (m_.stiffness() * u);
    Eigen::VectorXd next = solver(dt).solve(rhs);
    if (solver(dt).info() != Eigen::Success) throw std::runtime_error("linear solve failed");
    return next;
  }

 private:
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>& solver(double dt) {
    auto it = cache_.find(dt);
    if (it != cache_.end()) return *it->second;
    if (cache_.size() > 128) cache_.clear();
    Eigen::SparseMatrix<double> A = 0.5 * dt * m_.stiffness();
    for (std::ptrdiff_t i = 0; i < A.rows(); ++i) A.coeffRef(i, i) += m_.weights()[i];
    auto ldlt = std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>(A);
    if (ldlt->info() != Eigen::Success) throw std::runtime_error("factorization failed");
    return *cache_.emplace(dt, std::move(ldlt)).first->second;
  }

  const SpectralModel& m_;
  std::map<double, std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>> cache_;
};

constexpr double kRoundoff = 256.0 * std::numeric_limits<double>::epsilon();

// Integrates u' = -M^{-1} K u from u = 1 and records u at each requested time.
std::vector<Eigen::VectorXd> integrate(const SpectralModel& m, const std::vector<double>& times, double rtol) {
  if (times.empty()) return {};
  double prev = 0.0;
  for (double t : times) {
    if (!(t > prev)) throw DomainError("times must be positive and increasing");
    prev = t;
  }
  const Eigen::VectorXd& w = m.weights();
  CrankNicolson cn(m);
  Eigen::VectorXd u = Eigen::VectorXd::Ones(w.size());
  std::vector<Eigen::VectorXd> out;
  double now = 0.0;
  double dt = std::ldexp(times.back(), -40);
  std::size_t steps = 0;
  for (double target : times) {
    while (now < target) {
      const bool clipped = now + dt >= target;
      const double step = clipped ? target - now : dt;
      const Eigen::VectorXd full = cn.step(u, step);
      const Eigen::VectorXd half = cn.step(cn.step(u, 0.5 * step), 0.5 * step);
      const double err = w.dot((full - half).cwiseAbs()) / 3.0;
      // Error per unit of log-time, so the transient from the initial jump stays affordable;
      // never below the rounding noise of the difference itself.
      const double mass = w.dot(half.cwiseAbs());
      const double allowed = std::max(rtol * step / (now + step), kRoundoff) * mass;
      if (err > allowed) {
        dt = 0.5 * step;
        continue;
      }
      u = half;
      now = clipped ? target : now + step;
      if (!clipped && err < allowed / 16.0) dt *= 2.0;
      if (++steps > 5'000'000) throw BudgetExceeded("time stepper exceeded its step budget");
    }
    out.push_back(u);
  }
  return out;
}

}  // namespace

double stepper_heat_content(const SpectralModel& m, double t, double rtol) {
  return stepper_heat_content(m, std::vector<double>{t}, rtol).front();
}

std::vector<double> stepper_heat_content(const SpectralModel& m, const std::vector<double>& times, double rtol) {
  std::vector<double> q;
  for (const Eigen::VectorXd& u : integrate(m, times, rtol)) q.push_back(m.weights().dot(u));
  return q;
}

double lambda1(const SpectralModel& m) {
  if (m.has_dense_spectrum()) return m.eigenvalues()[0];
  // Inverse iteration in the mass inner product.
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(m.stiffness());
  if (solver.info() != Eigen::Success) throw std::runtime_error("stiffness factorization failed");
  const Eigen::VectorXd& w = m.weights();
  Eigen::VectorXd x = Eigen::VectorXd::Ones(w.size());
  double lambda = 0.0;
  for (int it = 0; it < 100000; ++it) {
    Eigen::VectorXd y = solver.solve(w.cwiseProduct(x));
    y /= std::sqrt(y.dot(w.cwiseProduct(y)));
    const double next = y.dot(m.stiffness() * y);
    x = y;
    if (std::abs(next - lambda) <= 1e-15 * next) return next;
    lambda = next;
  }
  return lambda;
}

double torsional_rigidity(const SpectralModel& m) {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(m.stiffness());
  if (solver.info() != Eigen::Success) throw std::runtime_error("singular stiffness matrix");
  const Eigen::VectorXd u = solver.solve(m.weights());
  return m.weights().dot(u);
}

std::pair<double, double> l2_mass_identity(const SpectralModel& m, double t, double rtol) {
  const Eigen::VectorXd u = integrate(m, {t}, rtol).front();
  const double q2t = stepper_heat_content(m, 2.0 * t, rtol);
  return {q2t, u.dot(m.weights().cwiseProduct(u))};
}

double large_time_rate(const SpectralModel& m, const std::vector<double>& t_grid) {
  if (t_grid.size() < 2) throw DomainError("need at least two times");
  constexpr double kFloor = 1e4 * std::numeric_limits<double>::min();
  // Q_t <= |G| exp(-lambda1 t) for the discrete model too; reject hopeless grids before stepping.
  if (m.volume() * std::exp(-lambda1(m) * t_grid.back()) <= kFloor)
    throw DomainError("heat content underflows on the grid");
  const std::vector<double> q = stepper_heat_content(m, t_grid);
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!(q[i] > kFloor)) throw DomainError("heat content underflows on the grid");
    const double y = -std::log(q[i]);
    st += t_grid[i];
    sy += y;
    stt += t_grid[i] * t_grid[i];
    sty += t_grid[i] * y;
  }
  const double n = static_cast<double>(q.size());
  return (n * sty - st * sy) / (n * stt - st * st);
}

double closed_form_heat_content(const ClosedForm& f, double t) {
  if (!(t > 0.0)) throw DomainError("t must be positive");
  if (!(f.ell > 0.0) || f.n < 1 || f.dirichlet < 1) throw DomainError("closed-form parameters must be positive");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  double amplitude = 0.0, rate = 0.0;  // amplitude * sum exp(-t (pi (2k+1) rate)^2) / (2k+1)^2
  switch (f.family) {
    case ClosedFamily::IntervalMixed:
      amplitude = 8.0 * f.ell / pi2, rate = 1.0 / (2.0 * f.ell);
      break;
    case ClosedFamily::IntervalDirichlet:
      amplitude = 8.0 * f.ell / pi2, rate = 1.0 / f.ell;
      break;
    case ClosedFamily::StarAllDirichlet:
      amplitude = 8.0 * f.n * f.ell / pi2, rate = 1.0 / (2.0 * f.ell);
      break;
    case ClosedFamily::PumpkinChain:
      amplitude = 8.0 * f.n * f.ell / pi2, rate = f.dirichlet / (2.0 * f.ell);
      break;
    case ClosedFamily::MirroredHalfStar:
      amplitude = 16.0 * f.n * f.ell / pi2, rate = 1.0 / (4.0 * f.ell);
      break;
    default:
      throw DomainError("unknown closed-form family");
  }
  double sum = 0.0;
  for (int k = 0;; ++k) {
    const double odd = 2.0 * k + 1.0;
    const double x = std::numbers::pi * odd * rate;
    const double term = std::exp(-t * x * x) / (odd * odd);
    if (k > 0 && term < 1e-17 * sum) break;
    sum += term;
  }
  return amplitude * sum;
}

}  // namespace graphheat
