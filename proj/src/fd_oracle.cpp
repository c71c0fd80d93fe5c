#include "viscowave/fd_oracle.hpp"

#include <cmath>
#include <string>

#include "viscowave/errors.hpp"

namespace viscowave {

namespace {

// Tridiagonal matrix with rows (lower, diag, upper), factored once by the
// Thomas algorithm and reused for every right-hand side.
class Tridiagonal {
 public:
  Tridiagonal(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper)
      : lower_(std::move(lower)), upper_(std::move(upper)) {
    const std::size_t n = diag.size();
    inv_pivot_.resize(n);
    c_prime_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double pivot = diag[i] - (i > 0 ? lower_[i] * c_prime_[i - 1] : 0.0);
      if (!(std::abs(pivot) > 1e-300)) throw NumericalError("singular tridiagonal factorization");
      inv_pivot_[i] = 1.0 / pivot;
      c_prime_[i] = i + 1 < n ? upper_[i] * inv_pivot_[i] : 0.0;
    }
  }

  void solve(std::vector<double>& rhs) const {
    const std::size_t n = rhs.size();
    rhs[0] *= inv_pivot_[0];
    for (std::size_t i = 1; i < n; ++i) rhs[i] = (rhs[i] - lower_[i] * rhs[i - 1]) * inv_pivot_[i];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c_prime_[i] * rhs[i + 1];
  }

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> inv_pivot_;
  std::vector<double> c_prime_;
};

// out = D u with mirror ghosts at both ends.
void laplacian(const std::vector<double>& u, double inv_dx2, std::vector<double>& out) {
  const std::size_t n = u.size();
  out[0] = 2.0 * (u[1] - u[0]) * inv_dx2;
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv_dx2;
  out[n - 1] = 2.0 * (u[n - 2] - u[n - 1]) * inv_dx2;
}

}  // namespace

void OracleConfig::validate() const {
  if (nx < 3) throw ValidationError("oracle nx must be >= 3");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("oracle dt must be positive");
  if (!(theta >= 0.5 && theta <= 1.0)) throw ValidationError("oracle theta must lie in [0.5, 1]");
}

double discrete_energy(std::span<const double> u, std::span<const double> v, double dx) {
  const std::size_t n = u.size();
  double kinetic = 0.0;
  for (std::size_t i = 0; i < n; ++i) kinetic += (i == 0 || i + 1 == n ? 0.5 : 1.0) * v[i] * v[i];
  double strain = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) strain += (u[i + 1] - u[i]) * (u[i + 1] - u[i]);
  return 0.5 * (kinetic * dx + strain / dx);
}

SolutionField integrate(const NeumannProblem& problem, const OracleConfig& config, OracleDiagnostics* diag) {
  config.validate();
  problem.validate();
  if (!problem.homogeneous || !problem.flux.is_zero()) {
    throw ValidationError("the oracle needs homogeneous boundary fluxes; homogenize first");
  }
  const Grid& g = problem.grid;
  if (config.nx != g.nx) {
    throw GridMismatchError("oracle nx " + std::to_string(config.nx) + " differs from problem nx " +
                            std::to_string(g.nx));
  }
  const double out_dt = g.dt();
  const double ratio = out_dt / config.dt;
  const int substeps = static_cast<int>(std::lround(ratio));
  if (substeps < 1 || std::abs(ratio - substeps) > 1e-9 * ratio) {
    throw ValidationError("output spacing " + std::to_string(out_dt) + " is not a multiple of oracle dt " +
                          std::to_string(config.dt));
  }
  const double dt = out_dt / substeps;
  const int nx = g.nx;
  const double dx = g.dx();
  const double inv_dx2 = 1.0 / (dx * dx);
  const double a = problem.params.a();
  const double eps = config.limit ? 0.0 : problem.params.eps();
  const double th = config.theta;

  // A = (1 + th a dt) I - th dt (eps + th dt) D
  const double s = th * dt * (eps + th * dt) * inv_dx2;
  const double diag_a = 1.0 + th * a * dt;
  std::vector<double> lo(nx, -s), di(nx, diag_a + 2.0 * s), up(nx, -s);
  up[0] = -2.0 * s;
  lo[nx - 1] = -2.0 * s;
  const Tridiagonal A(std::move(lo), std::move(di), std::move(up));

  std::vector<double> u(problem.f0.values);
  std::vector<double> v(problem.f1.values);
  std::vector<double> du(nx), dv(nx), b(nx), db(nx), rhs(nx), force(nx);
  std::vector<double> values(static_cast<std::size_t>(nx) * g.nt);
  std::copy(u.begin(), u.end(), values.begin());

  if (diag) {
    diag->substeps = substeps;
    diag->steps = substeps * (g.nt - 1);
    diag->energy.clear();
    diag->energy.reserve(diag->steps + 1);
    diag->energy.push_back(discrete_energy(u, v, dx));
    if (dt > dx) {
      diag->warnings.push_back("oracle dt " + std::to_string(dt) + " exceeds dx " + std::to_string(dx) +
                               "; expect reduced accuracy");
    }
  }

  for (int k = 0; k + 1 < g.nt; ++k) {
    for (int j = 0; j < substeps; ++j) {
      // Source at the half step, linear in time between output slices.
      const double w = (j + 0.5) / substeps;
      for (int i = 0; i < nx; ++i) force[i] = (1.0 - w) * problem.f.at(i, k) + w * problem.f.at(i, k + 1);
      laplacian(u, inv_dx2, du);
      laplacian(v, inv_dx2, dv);
      for (int i = 0; i < nx; ++i) b[i] = u[i] + dt * (1.0 - th) * v[i];
      laplacian(b, inv_dx2, db);
      for (int i = 0; i < nx; ++i) {
        const double r = v[i] + dt * (1.0 - th) * (eps * dv[i] + du[i] - a * v[i]) - dt * force[i];
        const double mb = diag_a * b[i] - th * dt * eps * db[i];
        rhs[i] = th * dt * r + mb;
      }
      A.solve(rhs);
      for (int i = 0; i < nx; ++i) {
        v[i] = (rhs[i] - b[i]) / (th * dt);
        u[i] = rhs[i];
      }
      if (diag) diag->energy.push_back(discrete_energy(u, v, dx));
    }
    std::copy(u.begin(), u.end(), values.begin() + static_cast<std::ptrdiff_t>(k + 1) * nx);
  }

  SolutionField out(g, std::move(values), Provenance::Oracle, problem.params, 0);
  out = out.with_equation_eps(eps).with_initial_velocity(problem.f1.values);
  return out;
}

}  // namespace viscowave
