#pragma once
#include <aimkit/core.h>
#include <functional>
#include <string>
#include <vector>

namespace aimkit::solvers {

/// min F(c) over {c >= 0, sum c = mass}; F smooth and strictly convex.
struct SimplexProblem {
  int dimension{0};
  double mass{1.0};
  std::function<double(const Vec &)> objective;
  std::function<Vec(const Vec &)> gradient;
  std::function<Mat(const Vec &)> hessian;
};

struct BarrierSchedule {
  double mu_start{1e-2};
  double mu_end{1e-12};
  double factor{0.2};
  int max_newton_steps{200}; // per barrier stage
};

struct SolverReport {
  Vec x;
  double objective{0.0};
  double kkt_residual{0.0};
  int iterations{0};
  bool regularized{false};
  std::vector<std::string> notes;
};

/// Stationarity residual on the simplex with multiplier fitted on the free
/// set: max over free k of |g_k - lambda|, and over bound k of
/// max(0, lambda - g_k).
double simplex_kkt_residual(const Vec &x, const Vec &gradient,
                            double bound_tol = 0.0);

/// Log-barrier damped Newton followed by an active-set Newton polish.
SolverReport solve_simplex_newton(const SimplexProblem &p, const Vec &start,
                                  const BarrierSchedule &schedule = {});

/// min 1/2 c^T S c - c^T b over {c >= 0, sum c = mass}.
struct QpProblem {
  Mat S;
  Vec b;
  double mass{1.0};
};

/// Primal active-set method with lowest-index (Bland) selection.
SolverReport solve_qp_nonneg(const QpProblem &p, const Vec &start,
                             int max_iter = 500);

double qp_objective(const QpProblem &p, const Vec &c);

/// Euclidean projection of x onto {c >= 0, sum c = mass}.
Vec project_simplex(const Vec &x, double mass);

} // namespace aimkit::solvers
