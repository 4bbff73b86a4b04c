// Iterative solvers for the discrete 2-Hessian equation: Jacobi fixed point,
// semi-implicit Poisson iteration, damped Newton for either scheme, and the
// explicit parabolic iteration.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hess2/grid.hpp"
#include "hess2/monotone_scheme.hpp"
#include "hess2/naive_scheme.hpp"
#include "hess2/problems.hpp"

namespace hess2 {

enum class Scheme { Naive, Monotone };
enum class Method { Jacobi, SemiImplicit, Newton, Parabolic };
enum class InitKind { ExactPlusNoise, JacobiWarmstart, PoissonSqrt2f, ZeroInterior };

struct SolverConfig {
  Scheme scheme = Scheme::Naive;
  int n_theta = 1;  // monotone scheme only
  Method method = Method::Newton;
  double tol = 1e-10;
  std::int64_t max_iters = 200000;
  double damping_min = 9.5367431640625e-07;  // 2^-20
  double parabolic_alpha_coeff = 0.1;        // alpha = coeff * h^4
  InitKind init = InitKind::JacobiWarmstart;
  double noise_amplitude = 0.01;
  double warmstart_tol = 1e-1;
  std::uint64_t seed = 0;
};

struct SolveReport {
  std::int64_t iterations = 0;
  std::vector<double> residual_history;  // length iterations + 1
  ScalarField final_field;
  bool converged = false;
  std::vector<double> damping_history;  // Newton only
  std::string failure;                  // empty on success
  double seconds = 0.0;
};

std::string to_json(const SolveReport& rep);

// Solves A v = b on interior unknowns to residual max-norm at most
// 1e-12 * max(1, |b|_inf). Throws on singular or non-converging systems.
std::vector<double> linear_solve(const SparseOperator& A,
                                 const std::vector<double>& b);

// Builds the initial iterate per config.init.
ScalarField initial_guess(const Problem& problem, const Grid3& grid,
                          const SolverConfig& config);

SolveReport solve_jacobi(const Problem& problem, const Grid3& grid,
                         const SolverConfig& config);
SolveReport solve_semi_implicit(const Problem& problem, const Grid3& grid,
                                const SolverConfig& config);
SolveReport solve_newton(const Problem& problem, const Grid3& grid,
                         const SolverConfig& config);
SolveReport solve_parabolic(const Problem& problem, const Grid3& grid,
                            const SolverConfig& config);

// Dispatch on config.method.
SolveReport solve(const Problem& problem, const Grid3& grid,
                  const SolverConfig& config);

}  // namespace hess2
