#include "hess2/problems.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace hess2 {

std::vector<Problem> catalog(double x0x, double x0y, double x0z) {
  std::vector<Problem> ps;
  auto radial2 = [x0x, x0y, x0z](double x, double y, double z) {
    double dx = x - x0x, dy = y - x0y, dz = z - x0z;
    return dx * dx + dy * dy + dz * dz;
  };

  {  // quadratic, non-convex but 2-admissible
    Problem p;
    p.name = "ex1";
    p.u_exact = [](double x, double y, double z) {
      return x * x - 0.5 * y * y + 2 * z * z;
    };
    p.f = [](double, double, double) { return 2.0; };
    p.hess_exact = [](double, double, double) {
      return HessianSample{2, -1, 4, 0, 0, 0};
    };
    ps.push_back(std::move(p));
  }

  {  // smooth convex radial
    Problem p;
    p.name = "ex2";
    p.u_exact = [radial2](double x, double y, double z) {
      return std::exp(radial2(x, y, z) / 2);
    };
    p.f = [radial2](double x, double y, double z) {
      double r2 = radial2(x, y, z);
      return (3 + 2 * r2) * std::exp(r2);
    };
    p.hess_exact = [x0x, x0y, x0z, radial2](double x, double y, double z) {
      double e = std::exp(radial2(x, y, z) / 2);
      double a = x - x0x, b = y - x0y, c = z - x0z;
      return HessianSample{(1 + a * a) * e, (1 + b * b) * e, (1 + c * c) * e,
                           a * b * e,       a * c * e,       b * c * e};
    };
    p.params = {{"x0x", x0x}, {"x0y", x0y}, {"x0z", x0z}};
    ps.push_back(std::move(p));
  }

  {  // smooth non-convex exponential
    Problem p;
    p.name = "ex3";
    auto w = [](double x, double y, double z) {
      return 2 * x * x - y * y + 4 * z * z;
    };
    p.u_exact = [w](double x, double y, double z) {
      return std::exp(w(x, y, z));
    };
    p.f = [w](double x, double y, double z) {
      return 8 * (1 + 12 * x * x + 6 * y * y + 16 * z * z) *
             std::exp(2 * w(x, y, z));
    };
    p.hess_exact = [w](double x, double y, double z) {
      double e = std::exp(w(x, y, z));
      double wx = 4 * x, wy = -2 * y, wz = 8 * z;
      return HessianSample{(4 + wx * wx) * e,  (-2 + wy * wy) * e,
                           (8 + wz * wz) * e,  wx * wy * e,
                           wx * wz * e,        wy * wz * e};
    };
    ps.push_back(std::move(p));
  }

  {  // smooth non-convex radial, log
    Problem p;
    p.name = "ex4";
    auto s = [](double x, double y, double z) { return x * x + y * y + z * z; };
    p.u_exact = [s](double x, double y, double z) {
      return std::log(2 + s(x, y, z));
    };
    p.f = [s](double x, double y, double z) {
      double q = s(x, y, z);
      return -4 * (-6 + q) / std::pow(2 + q, 3);
    };
    p.hess_exact = [s](double x, double y, double z) {
      double q = 2 + s(x, y, z);
      double a = 2 / q, b = -4 / (q * q);
      return HessianSample{a + b * x * x, a + b * y * y, a + b * z * z,
                           b * x * y,     b * x * z,     b * y * z};
    };
    ps.push_back(std::move(p));
  }

  {  // C^1 cone-like function, f with removable singularity at x0
    Problem p;
    p.name = "ex5";
    const double a = 0.2;
    p.u_exact = [radial2, a](double x, double y, double z) {
      double r = std::sqrt(radial2(x, y, z));
      double t = std::max(r - a, 0.0);
      return 0.5 * t * t;
    };
    p.f = [radial2, a](double x, double y, double z) {
      double r = std::sqrt(radial2(x, y, z));
      if (r <= a) return 0.0;
      return 3 + 1 / (25 * r * r) - 4 / (5 * r);
    };
    p.hess_exact = [x0x, x0y, x0z, radial2, a](double x, double y, double z) {
      double r = std::sqrt(radial2(x, y, z));
      if (r <= a) return HessianSample{0, 0, 0, 0, 0, 0};
      double dx = x - x0x, dy = y - x0y, dz = z - x0z;
      double d = 1 - a / r, c = a / (r * r * r);
      return HessianSample{d + c * dx * dx, d + c * dy * dy, d + c * dz * dz,
                           c * dx * dy,     c * dx * dz,     c * dy * dz};
    };
    // the kink sphere r = a is excluded from pointwise validation
    p.singular = [radial2, a](double x, double y, double z) {
      double r = std::sqrt(radial2(x, y, z));
      return std::abs(r - a) < 1e-3;
    };
    p.params = {{"x0x", x0x}, {"x0y", x0y}, {"x0z", x0z}};
    ps.push_back(std::move(p));
  }

  {  // blow-up of f at the corner (1,1,1)
    Problem p;
    p.name = "ex6";
    auto s = [](double x, double y, double z) { return x * x + y * y + z * z; };
    p.u_exact = [s](double x, double y, double z) {
      return -std::sqrt(3 - s(x, y, z));
    };
    p.f = [s](double x, double y, double z) {
      double q = s(x, y, z);
      return -(-9 + q) / ((-3 + q) * (-3 + q));
    };
    p.hess_exact = [s](double x, double y, double z) {
      double q = 3 - s(x, y, z);
      double t = 1 / std::sqrt(q), t3 = t / q;
      return HessianSample{t + t3 * x * x, t + t3 * y * y, t + t3 * z * z,
                           t3 * x * y,     t3 * x * z,     t3 * y * z};
    };
    p.singular = [s](double x, double y, double z) {
      return 3 - s(x, y, z) < 1e-2;
    };
    ps.push_back(std::move(p));
  }

  {  // f = 1, g = 0 on the box; no exact solution
    Problem p;
    p.name = "ex7";
    p.f = [](double, double, double) { return 1.0; };
    p.g = [](double, double, double) { return 0.0; };
    ps.push_back(std::move(p));
  }

  {  // f = 1, g = 0 on a union of two balls
    Problem p;
    p.name = "ex8";
    p.f = [](double, double, double) { return 1.0; };
    p.g = [](double, double, double) { return 0.0; };
    p.domain = DomainSpec::ball_union(
        {{0.35, 0.35, 0.5, 0.3}, {0.65, 0.65, 0.5, 0.3}});
    ps.push_back(std::move(p));
  }

  for (Problem& p : ps)
    if (!p.g && p.u_exact) p.g = p.u_exact;
  return ps;
}

const Problem& find_problem(const std::vector<Problem>& problems,
                            const std::string& name) {
  for (const Problem& p : problems)
    if (p.name == name) return p;
  throw std::invalid_argument("unknown problem: " + name);
}

ValidationReport validate_problem(const Problem& p, int samples,
                                  std::uint64_t seed) {
  if (!p.hess_exact)
    throw std::invalid_argument("validate_problem: no analytic Hessian for " +
                                p.name);
  ValidationReport rep;
  rep.problem = p.name;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int taken = 0;
  while (taken < samples) {
    double x = unif(rng), y = unif(rng), z = unif(rng);
    if (!p.domain.contains(x, y, z)) continue;
    if (p.singular && p.singular(x, y, z)) continue;
    ++taken;
    double fv = p.f(x, y, z);
    double r = std::abs(c_of_hessian(p.hess_exact(x, y, z)) - fv) /
               std::max(1.0, std::abs(fv));
    if (r > rep.max_residual) {
      rep.max_residual = r;
      rep.worst_x = x;
      rep.worst_y = y;
      rep.worst_z = z;
    }
  }
  rep.samples = samples;
  rep.pass = rep.max_residual <= 1e-8;
  return rep;
}

}  // namespace hess2
