#include "hess2/solvers.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace hess2 {

namespace {

using Clock = std::chrono::steady_clock;

Eigen::SparseMatrix<double> to_eigen(const SparseOperator& op) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(op.entries.size());
  for (const SparseTriplet& t : op.entries)
    trips.emplace_back(static_cast<int>(t.row), static_cast<int>(t.col),
                       t.value);
  Eigen::SparseMatrix<double> A(static_cast<int>(op.dim),
                                static_cast<int>(op.dim));
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

double residual_contract(const Eigen::VectorXd& b) {
  return 1e-12 * std::max(1.0, b.lpNorm<Eigen::Infinity>());
}

// One scheme evaluation: residual field S[u]-f at interior (0 elsewhere)
// and, for the monotone scheme, the active triplets.
struct Discretization {
  Scheme scheme;
  const DirectionSet* dirs = nullptr;  // monotone only

  ScalarField residual(const ScalarField& u, const ScalarField& f,
                       std::vector<ActiveTriplet>* active = nullptr) const {
    ScalarField s = scheme == Scheme::Naive ? s2_naive(u) : ScalarField();
    if (scheme == Scheme::Monotone) {
      MonotoneEval ev = s2_monotone(u, *dirs);
      s = std::move(ev.values);
      if (active) *active = std::move(ev.active);
    }
    for (std::int64_t idx : u.grid->interior_nodes())
      s.values[idx] -= f.values[idx];
    return s;
  }

  SparseOperator jacobian(const ScalarField& u,
                          const std::vector<ActiveTriplet>& active) const {
    if (scheme == Scheme::Naive) return jacobian_naive(u);
    return jacobian_monotone(u, *dirs, active);
  }
};

// -Laplacian (SPD) over interior unknowns, 7-point, Dirichlet eliminated.
Eigen::SparseMatrix<double> neg_laplacian(const Grid3& g) {
  const double ih2 = 1.0 / (g.h() * g.h());
  std::vector<Eigen::Triplet<double>> trips;
  for (std::int64_t idx : g.interior_nodes()) {
    auto [i, j, k] = g.ijk(idx);
    int row = static_cast<int>(g.interior_ordinal(idx));
    trips.emplace_back(row, row, 6 * ih2);
    const int nb[6][3] = {{i + 1, j, k}, {i - 1, j, k}, {i, j + 1, k},
                          {i, j - 1, k}, {i, j, k + 1}, {i, j, k - 1}};
    for (auto& q : nb) {
      std::int64_t col = g.interior_ordinal(g.index(q[0], q[1], q[2]));
      if (col >= 0) trips.emplace_back(row, static_cast<int>(col), -ih2);
    }
  }
  Eigen::SparseMatrix<double> A(static_cast<int>(g.num_interior()),
                                static_cast<int>(g.num_interior()));
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

// Solves lap(u) = rhs at interior with u = g_vals on the band; returns the
// full field (band/exterior copied from g_vals).
ScalarField poisson_solve(const Grid3& g, const ScalarField& rhs,
                          const ScalarField& g_vals) {
  const double ih2 = 1.0 / (g.h() * g.h());
  Eigen::SparseMatrix<double> A = neg_laplacian(g);
  Eigen::VectorXd b(g.num_interior());
  for (std::int64_t idx : g.interior_nodes()) {
    auto [i, j, k] = g.ijk(idx);
    double v = -rhs.values[idx];
    const int nb[6][3] = {{i + 1, j, k}, {i - 1, j, k}, {i, j + 1, k},
                          {i, j - 1, k}, {i, j, k + 1}, {i, j, k - 1}};
    for (auto& q : nb) {
      std::int64_t qi = g.index(q[0], q[1], q[2]);
      if (g.node_class(qi) != NodeClass::Interior)
        v += ih2 * g_vals.values[qi];
    }
    b[g.interior_ordinal(idx)] = v;
  }
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> llt(A);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("poisson_solve: factorization failed");
  Eigen::VectorXd x = llt.solve(b);
  ScalarField out = g_vals;
  for (std::int64_t idx : g.interior_nodes())
    out.values[idx] = x[g.interior_ordinal(idx)];
  return out;
}

double squared_hessian_norm(const HessianSample& hs) {
  return hs.dxx * hs.dxx + hs.dyy * hs.dyy + hs.dzz * hs.dzz +
         2 * (hs.dxy * hs.dxy + hs.dxz * hs.dxz + hs.dyz * hs.dyz);
}

void finish(SolveReport& rep, Clock::time_point t0) {
  rep.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

std::vector<double> linear_solve(const SparseOperator& A,
                                 const std::vector<double>& b) {
  if (static_cast<std::int64_t>(b.size()) != A.dim)
    throw std::invalid_argument("linear_solve: size mismatch");
  // structurally deficient rows make SparseLU misbehave; fail fast instead
  std::vector<double> row_max(static_cast<std::size_t>(A.dim), 0.0);
  double mat_max = 0.0;
  for (const SparseTriplet& t : A.entries) {
    row_max[t.row] = std::max(row_max[t.row], std::abs(t.value));
    mat_max = std::max(mat_max, std::abs(t.value));
  }
  for (double rm : row_max)
    if (rm <= 1e-14 * std::max(mat_max, 1e-300))
      throw std::runtime_error("linear_solve: singular or unstable system");
  Eigen::SparseMatrix<double> M = to_eigen(A);
  Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(b.data(), b.size());
  const double contract = residual_contract(rhs);

  Eigen::BiCGSTAB<Eigen::SparseMatrix<double>,
                  Eigen::IncompleteLUT<double>> bicg;
  bicg.setTolerance(1e-14);
  bicg.setMaxIterations(2000);
  bicg.compute(M);
  Eigen::VectorXd x;
  if (bicg.info() == Eigen::Success) {
    x = bicg.solve(rhs);
    if ((M * x - rhs).lpNorm<Eigen::Infinity>() <= contract)
      return {x.data(), x.data() + x.size()};
  }

  // Direct fallback.
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(M);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("linear_solve: singular or unstable system");
  x = lu.solve(rhs);
  if ((M * x - rhs).lpNorm<Eigen::Infinity>() > contract)
    throw std::runtime_error("linear_solve: residual contract not met");
  return {x.data(), x.data() + x.size()};
}

ScalarField initial_guess(const Problem& problem, const Grid3& grid,
                          const SolverConfig& config) {
  SpatialFn g = problem.g ? problem.g : problem.u_exact;
  if (!g) throw std::invalid_argument("initial_guess: no boundary data");
  ScalarField f = sample_field(grid, problem.f);

  auto noisy_exact = [&]() {
    ScalarField u = sample_field(grid, problem.u_exact);
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> noise(-config.noise_amplitude,
                                                 config.noise_amplitude);
    for (std::int64_t idx : grid.interior_nodes()) u.values[idx] += noise(rng);
    apply_boundary(u, g);
    return u;
  };
  auto poisson_init = [&]() {
    ScalarField rhs(grid, 0.0);
    for (std::int64_t idx : grid.interior_nodes()) {
      double fv = f.values[idx];
      if (fv < 0) throw std::runtime_error("initial_guess: f < 0 at a node");
      rhs.values[idx] = std::sqrt(2 * fv);
    }
    ScalarField gv = sample_field(grid, g);
    return poisson_solve(grid, rhs, gv);
  };

  switch (config.init) {
    case InitKind::ExactPlusNoise:
      if (!problem.has_exact())
        throw std::invalid_argument("initial_guess: no exact solution");
      return noisy_exact();
    case InitKind::PoissonSqrt2f:
      return poisson_init();
    case InitKind::ZeroInterior: {
      ScalarField u(grid, 0.0);
      apply_boundary(u, g);
      return u;
    }
    case InitKind::JacobiWarmstart: {
      ScalarField u = problem.has_exact() ? noisy_exact() : poisson_init();
      ScalarField res = s2_naive(u);
      for (std::int64_t idx : grid.interior_nodes())
        res.values[idx] -= f.values[idx];
      std::int64_t it = 0;
      while (max_norm_interior(res) >= config.warmstart_tol &&
             it < config.max_iters) {
        u = jacobi_update(u, f);
        res = s2_naive(u);
        for (std::int64_t idx : grid.interior_nodes())
          res.values[idx] -= f.values[idx];
        ++it;
      }
      return u;
    }
  }
  throw std::logic_error("initial_guess: bad init kind");
}

SolveReport solve_jacobi(const Problem& problem, const Grid3& grid,
                         const SolverConfig& config) {
  auto t0 = Clock::now();
  if (config.scheme != Scheme::Naive)
    throw std::invalid_argument("solve_jacobi: naive scheme only");
  SolverConfig init_cfg = config;
  if (config.init == InitKind::JacobiWarmstart)
    init_cfg.init = problem.has_exact() ? InitKind::ExactPlusNoise
                                        : InitKind::PoissonSqrt2f;
  ScalarField f = sample_field(grid, problem.f);
  ScalarField u = initial_guess(problem, grid, init_cfg);
  Discretization disc{Scheme::Naive};

  SolveReport rep;
  double r = max_norm_interior(disc.residual(u, f));
  const double r0 = r;
  rep.residual_history.push_back(r);
  while (r >= config.tol && rep.iterations < config.max_iters) {
    ScalarField next = jacobi_update(u, f);
    double update = max_norm_error(next, u);
    u = std::move(next);
    r = max_norm_interior(disc.residual(u, f));
    rep.residual_history.push_back(r);
    ++rep.iterations;
    if (r > 1e6 * std::max(r0, 1e-300)) {
      rep.failure = "divergence";
      break;
    }
    // stop only at the roundoff floor of the iterate, not at tol: near the
    // fixed point the residual lags the update size by a factor of h^-2
    if (update <= 1e-15 * (1 + max_norm_interior(u))) break;
  }
  rep.final_field = std::move(u);
  rep.converged = r < config.tol && rep.failure.empty();
  finish(rep, t0);
  return rep;
}

SolveReport solve_semi_implicit(const Problem& problem, const Grid3& grid,
                                const SolverConfig& config) {
  auto t0 = Clock::now();
  ScalarField f = sample_field(grid, problem.f);
  for (std::int64_t idx : grid.interior_nodes())
    if (f.values[idx] < 0)
      throw std::invalid_argument("solve_semi_implicit: f must be >= 0");
  SpatialFn gfn = problem.g ? problem.g : problem.u_exact;
  ScalarField gv = sample_field(grid, gfn);

  ScalarField rhs(grid, 0.0);
  for (std::int64_t idx : grid.interior_nodes())
    rhs.values[idx] = std::sqrt(2 * f.values[idx]);
  ScalarField u = poisson_solve(grid, rhs, gv);

  Discretization disc{Scheme::Naive};
  SolveReport rep;
  // History records the stopping metric: the initial PDE residual, then the
  // max-norm difference of successive iterates.
  rep.residual_history.push_back(max_norm_interior(disc.residual(u, f)));
  double diff = rep.residual_history.back();
  while (diff >= config.tol && rep.iterations < config.max_iters) {
    for (std::int64_t idx : grid.interior_nodes()) {
      auto [i, j, k] = grid.ijk(idx);
      HessianSample hs = hessian_sample(u, i, j, k);
      rhs.values[idx] = std::sqrt(squared_hessian_norm(hs) + 2 * f.values[idx]);
    }
    ScalarField next = poisson_solve(grid, rhs, gv);
    diff = max_norm_error(next, u);
    u = std::move(next);
    rep.residual_history.push_back(diff);
    ++rep.iterations;
  }
  rep.final_field = std::move(u);
  rep.converged = diff < config.tol;
  finish(rep, t0);
  return rep;
}

SolveReport solve_newton(const Problem& problem, const Grid3& grid,
                         const SolverConfig& config) {
  auto t0 = Clock::now();
  DirectionSet dirs;
  Discretization disc{config.scheme};
  if (config.scheme == Scheme::Monotone) {
    dirs = generate_directions(config.n_theta);
    disc.dirs = &dirs;
  }
  ScalarField f = sample_field(grid, problem.f);
  ScalarField u = initial_guess(problem, grid, config);

  SolveReport rep;
  std::vector<ActiveTriplet> active;
  ScalarField res = disc.residual(u, f, &active);
  double r = max_norm_interior(res);
  rep.residual_history.push_back(r);
  const std::int64_t newton_cap = std::min<std::int64_t>(config.max_iters, 500);
  while (r >= config.tol && rep.iterations < newton_cap) {
    SparseOperator J = disc.jacobian(u, active);
    std::vector<double> b(static_cast<std::size_t>(grid.num_interior()));
    for (std::int64_t idx : grid.interior_nodes())
      b[grid.interior_ordinal(idx)] = res.values[idx];
    std::vector<double> v;
    try {
      v = linear_solve(J, b);
    } catch (const std::exception& e) {
      rep.failure = e.what();
      break;
    }
    double alpha = 1.0;
    ScalarField trial = u;
    ScalarField trial_res;
    std::vector<ActiveTriplet> trial_active;
    double r_trial = r;
    while (alpha >= config.damping_min) {
      for (std::int64_t idx : grid.interior_nodes())
        trial.values[idx] =
            u.values[idx] - alpha * v[grid.interior_ordinal(idx)];
      trial_res = disc.residual(trial, f, &trial_active);
      r_trial = max_norm_interior(trial_res);
      if (r_trial < r) break;
      alpha /= 2;
    }
    if (alpha < config.damping_min) {
      rep.failure = "damping floor reached";
      break;
    }
    u = std::move(trial);
    res = std::move(trial_res);
    active = std::move(trial_active);
    r = r_trial;
    rep.residual_history.push_back(r);
    rep.damping_history.push_back(alpha);
    ++rep.iterations;
  }
  rep.final_field = std::move(u);
  rep.converged = r < config.tol && rep.failure.empty();
  finish(rep, t0);
  return rep;
}

SolveReport solve_parabolic(const Problem& problem, const Grid3& grid,
                            const SolverConfig& config) {
  auto t0 = Clock::now();
  DirectionSet dirs;
  Discretization disc{config.scheme};
  if (config.scheme == Scheme::Monotone) {
    dirs = generate_directions(config.n_theta);
    disc.dirs = &dirs;
  }
  ScalarField f = sample_field(grid, problem.f);
  ScalarField u = initial_guess(problem, grid, config);

  const double h = grid.h();
  const double alpha = config.parabolic_alpha_coeff * h * h * h * h;
  SolveReport rep;
  ScalarField res = disc.residual(u, f);
  double r = max_norm_interior(res);
  const double r0 = r;
  rep.residual_history.push_back(r);
  while (r >= config.tol && rep.iterations < config.max_iters) {
    // Forward Euler on u_t = S[u] - f. With the monotone scheme and a small
    // enough step this is a nonexpansive fixed-point map; with the naive
    // scheme it is the non-convergence demonstration.
    for (std::int64_t idx : grid.interior_nodes())
      u.values[idx] += alpha * res.values[idx];
    res = disc.residual(u, f);
    double r_new = max_norm_interior(res);
    rep.residual_history.push_back(r_new);
    ++rep.iterations;
    if (config.scheme == Scheme::Monotone && r_new > r * (1 + 1e-12)) {
      rep.failure = "non-contraction detected (CFL violated?)";
      r = r_new;
      break;
    }
    r = r_new;
    if (r > 1e6 * std::max(r0, 1e-300)) {
      rep.failure = "divergence";
      break;
    }
  }
  rep.final_field = std::move(u);
  rep.converged = r < config.tol && rep.failure.empty();
  finish(rep, t0);
  return rep;
}

SolveReport solve(const Problem& problem, const Grid3& grid,
                  const SolverConfig& config) {
  switch (config.method) {
    case Method::Jacobi: return solve_jacobi(problem, grid, config);
    case Method::SemiImplicit: return solve_semi_implicit(problem, grid, config);
    case Method::Newton: return solve_newton(problem, grid, config);
    case Method::Parabolic: return solve_parabolic(problem, grid, config);
  }
  throw std::logic_error("solve: bad method");
}

std::string to_json(const SolveReport& rep) {
  nlohmann::json j;
  j["iterations"] = rep.iterations;
  j["residual_history"] = rep.residual_history;
  j["converged"] = rep.converged;
  j["damping_history"] = rep.damping_history;
  j["failure"] = rep.failure;
  j["seconds"] = rep.seconds;
  return j.dump(2);
}

}  // namespace hess2
