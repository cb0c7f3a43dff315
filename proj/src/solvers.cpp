#include <aimkit/solvers.h>
#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <fmt/core.h>
#include <limits>
#include <numeric>

namespace aimkit::solvers {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Solve [H 1; 1^T 0] [d; lambda] = [r; 0] for d, where H is the free block.
// Returns false when H is not positive definite.
bool equality_newton(const Mat &H, const Vec &r, Vec &d, double &lambda) {
  Eigen::LDLT<Mat> ldlt(H);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    return false;
  const Vec ones = Vec::Ones(H.rows());
  const Vec hr = ldlt.solve(r);
  const Vec h1 = ldlt.solve(ones);
  const double denom = ones.dot(h1);
  if (!(denom > 0.0) || !hr.allFinite() || !h1.allFinite())
    return false;
  lambda = ones.dot(hr) / denom;
  d = hr - lambda * h1;
  return d.allFinite();
}

Mat regularize(const Mat &H, double eps) {
  Mat out = H;
  out.diagonal().array() += eps;
  return out;
}

Vec subvector(const Vec &x, const std::vector<int> &idx) {
  Vec out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    out[i] = x[idx[i]];
  return out;
}

Mat submatrix(const Mat &A, const std::vector<int> &idx) {
  Mat out(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j)
      out(i, j) = A(idx[i], idx[j]);
  return out;
}

// Make the sum exact by adjusting the largest component.
void fix_mass(Vec &x, double mass) {
  for (auto &v : x)
    if (v < 0.0)
      v = 0.0;
  if (x.size() == 0)
    return;
  Eigen::Index k;
  x.maxCoeff(&k);
  x[k] += mass - x.sum();
  if (x[k] < 0.0)
    x[k] = 0.0;
}

double fitted_multiplier(const Vec &x, const Vec &g, double bound_tol) {
  double lo = inf, hi = -inf;
  for (Eigen::Index k = 0; k < x.size(); ++k)
    if (x[k] > bound_tol) {
      lo = std::min(lo, g[k]);
      hi = std::max(hi, g[k]);
    }
  if (lo == inf)
    return g.minCoeff();
  return 0.5 * (lo + hi);
}

} // namespace

double simplex_kkt_residual(const Vec &x, const Vec &g, double bound_tol) {
  const double lambda = fitted_multiplier(x, g, bound_tol);
  double res = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (x[k] > bound_tol)
      res = std::max(res, std::abs(g[k] - lambda));
    else
      res = std::max(res, std::max(0.0, lambda - g[k]));
  }
  return res;
}

Vec project_simplex(const Vec &x, double mass) {
  const auto n = x.size();
  std::vector<double> u(x.data(), x.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0, theta = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumsum += u[j];
    const double t = (cumsum - mass) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0)
      theta = t;
  }
  Vec out = (x.array() - theta).max(0.0);
  return out;
}

SolverReport solve_simplex_newton(const SimplexProblem &p, const Vec &start,
                                  const BarrierSchedule &schedule) {
  const int n = p.dimension;
  if (n < 1 || start.size() != n)
    throw ValidationError(fmt::format(
        "simplex problem of dimension {} with start of size {}", n,
        start.size()));
  if (!(p.mass >= 0.0) || !std::isfinite(p.mass))
    throw ValidationError("simplex mass must be >= 0");
  SolverReport rep;
  if (p.mass == 0.0 || n == 1) {
    rep.x = Vec::Constant(n, n == 1 ? p.mass : 0.0);
    rep.objective = p.objective(rep.x);
    return rep;
  }
  if ((start.array() < 0.0).any() ||
      std::abs(start.sum() - p.mass) > 1e-8 * std::max(1.0, p.mass))
    throw ValidationError("simplex start must be feasible");

  // nudge into the interior
  Vec x = start;
  const double eps = 1e-3;
  x = (1.0 - eps) * x + Vec::Constant(n, eps * p.mass / n);
  double f = p.objective(x);
  if (!std::isfinite(f))
    throw NumericalError("simplex objective is not finite at the start");

  auto barrier = [&](const Vec &c, double mu) {
    if ((c.array() <= 0.0).any())
      return inf;
    const double v = p.objective(c);
    if (!std::isfinite(v))
      return inf;
    return v - mu * c.array().log().sum();
  };

  int total = 0;
  for (double mu = schedule.mu_start; mu >= schedule.mu_end * (1 - 1e-9);
       mu *= schedule.factor) {
    int steps = 0;
    double phi = barrier(x, mu);
    while (true) {
      if (++steps > schedule.max_newton_steps)
        throw ConvergenceError(fmt::format(
            "simplex Newton: no convergence within {} steps at barrier {:.1e}",
            schedule.max_newton_steps, mu));
      ++total;
      const Vec g = p.gradient(x) - mu * x.cwiseInverse();
      Mat H = p.hessian(x);
      H.diagonal() += mu * x.array().square().inverse().matrix();
      Vec d;
      double lambda;
      if (!equality_newton(H, -g, d, lambda)) {
        rep.regularized = true;
        if (!equality_newton(regularize(H, 1e-12 * std::max(1.0, H.diagonal().maxCoeff())), -g, d, lambda))
          throw NumericalError("simplex Newton: singular KKT system");
      }
      const double decrement = -g.dot(d);
      if (decrement <= 2e-15 * std::max(1.0, std::abs(phi)))
        break;
      double amax = 1.0;
      for (int k = 0; k < n; ++k)
        if (d[k] < 0.0)
          amax = std::min(amax, -0.995 * x[k] / d[k]);
      double a = amax;
      double trial = barrier(x + a * d, mu);
      while (!(trial <= phi - 1e-4 * a * decrement) && a > 1e-16) {
        a *= 0.5;
        trial = barrier(x + a * d, mu);
      }
      if (a <= 1e-16)
        break;
      x += a * d;
      x *= p.mass / x.sum();
      phi = barrier(x, mu);
      if (a * d.cwiseAbs().maxCoeff() <= 1e-15 * p.mass)
        break;
    }
  }

  // Polish: Newton on the free set with bounds handled by an active set.
  std::vector<bool> active(n, false);
  for (int k = 0; k < n; ++k)
    active[k] = x[k] <= 1e-8 * p.mass;
  if (std::all_of(active.begin(), active.end(), [](bool b) { return b; })) {
    Eigen::Index k;
    x.maxCoeff(&k);
    active[k] = false;
  }
  Vec best = x;
  fix_mass(best, p.mass);
  double best_res = simplex_kkt_residual(best, p.gradient(best), 0.0);
  Vec y = x;
  for (int k = 0; k < n; ++k)
    if (active[k])
      y[k] = 0.0;
  fix_mass(y, p.mass);
  for (int outer = 0; outer < 4 * n + 10; ++outer) {
    std::vector<int> free;
    for (int k = 0; k < n; ++k)
      if (!active[k])
        free.push_back(k);
    bool hit_bound = false;
    for (int it = 0; it < 100; ++it) {
      ++total;
      const Vec g = p.gradient(y);
      const Mat H = p.hessian(y);
      Vec d;
      double lambda;
      const Mat Hf = submatrix(H, free);
      if (!equality_newton(Hf, -subvector(g, free), d, lambda) &&
          !equality_newton(regularize(Hf, 1e-12 * std::max(1.0, Hf.diagonal().maxCoeff())),
                           -subvector(g, free), d, lambda))
        break;
      double amax = 1.0;
      int block = -1;
      for (std::size_t i = 0; i < free.size(); ++i)
        if (d[i] < 0.0 && -y[free[i]] / d[i] < amax) {
          amax = -y[free[i]] / d[i];
          block = static_cast<int>(i);
        }
      const double f0 = p.objective(y);
      double a = amax;
      Vec trial = y;
      for (int ls = 0; ls < 60; ++ls) {
        trial = y;
        for (std::size_t i = 0; i < free.size(); ++i)
          trial[free[i]] += a * d[i];
        const double f1 = p.objective(trial);
        if (std::isfinite(f1) && f1 <= f0 + 1e-4 * a * subvector(g, free).dot(d) + 1e-15 * std::abs(f0))
          break;
        a *= 0.5;
        block = -1;
      }
      y = trial;
      if (block >= 0 && a == amax) {
        y[free[block]] = 0.0;
        active[free[block]] = true;
        hit_bound = true;
        break;
      }
      fix_mass(y, p.mass);
      if (d.cwiseAbs().maxCoeff() * a <= 1e-15 * p.mass)
        break;
    }
    fix_mass(y, p.mass);
    if (hit_bound)
      continue;
    const Vec g = p.gradient(y);
    const double lambda = fitted_multiplier(y, g, 0.0);
    const double res = simplex_kkt_residual(y, g, 0.0);
    if (res < best_res) {
      best = y;
      best_res = res;
    }
    // release the lowest-index bound with a negative multiplier
    int release = -1;
    for (int k = 0; k < n; ++k)
      if (active[k] && g[k] - lambda < -1e-10) {
        release = k;
        break;
      }
    if (release < 0)
      break;
    active[release] = false;
  }

  rep.x = best;
  rep.objective = p.objective(best);
  rep.kkt_residual = best_res;
  rep.iterations = total;
  return rep;
}

double qp_objective(const QpProblem &p, const Vec &c) {
  return 0.5 * c.dot(p.S * c) - c.dot(p.b);
}

SolverReport solve_qp_nonneg(const QpProblem &p, const Vec &start,
                             int max_iter) {
  const auto n = p.S.rows();
  if (p.S.cols() != n || p.b.size() != n || n < 1)
    throw ValidationError("QP dimensions are inconsistent");
  if (!p.S.allFinite() || !p.b.allFinite())
    throw ValidationError("QP data must be finite");
  if ((p.S - p.S.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * std::max(1.0, p.S.cwiseAbs().maxCoeff()))
    throw ValidationError("QP matrix must be symmetric");
  if (!(p.mass >= 0.0) || !std::isfinite(p.mass))
    throw ValidationError("QP mass must be >= 0");

  SolverReport rep;
  if (p.mass == 0.0) {
    rep.x = Vec::Zero(n);
    return rep;
  }
  Vec x = start;
  if (x.size() != n || (x.array() < 0.0).any() || !x.allFinite() ||
      std::abs(x.sum() - p.mass) > 1e-10 * std::max(1.0, p.mass)) {
    x = Vec::Constant(n, p.mass / static_cast<double>(n));
    rep.notes.push_back("infeasible start replaced by the uniform point");
  }
  fix_mass(x, p.mass);

  Mat S = p.S;
  {
    Eigen::LDLT<Mat> ldlt(S);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
        (ldlt.vectorD().array() <= 0.0).any()) {
      S.diagonal().array() += 1e-12;
      rep.regularized = true;
      rep.notes.push_back("overlap matrix regularized by 1e-12 on the diagonal");
      Eigen::LDLT<Mat> again(S);
      if (again.info() != Eigen::Success || !again.isPositive())
        throw NumericalError("QP matrix is indefinite beyond regularization");
    }
  }
  const double scale = std::max(1.0, S.cwiseAbs().maxCoeff() * p.mass +
                                         p.b.cwiseAbs().maxCoeff());
  const double mult_tol = 1e-13 * scale;

  std::vector<bool> active(n);
  for (Eigen::Index k = 0; k < n; ++k)
    active[k] = x[k] == 0.0;

  int it = 0;
  for (; it < max_iter; ++it) {
    std::vector<int> free;
    for (Eigen::Index k = 0; k < n; ++k)
      if (!active[k])
        free.push_back(static_cast<int>(k));
    const Vec g = S * x - p.b;
    Vec d;
    double lambda = 0.0;
    if (free.size() > 1) {
      const Mat Sf = submatrix(S, free);
      if (!equality_newton(Sf, -subvector(g, free), d, lambda))
        throw NumericalError("QP reduced Hessian is not positive definite");
    } else {
      d = Vec::Zero(free.size());
    }
    double free_residual = 0.0;
    if (!free.empty()) {
      double mean = 0.0;
      for (int k : free)
        mean += g[k];
      mean /= static_cast<double>(free.size());
      for (int k : free)
        free_residual = std::max(free_residual, std::abs(g[k] - mean));
    }
    // a step that cannot lower the objective only carries round-off
    bool stalled = free_residual <= mult_tol;
    if (!stalled && d.size() > 0) {
      double amax_probe = 1.0;
      for (std::size_t i = 0; i < free.size(); ++i)
        if (d[i] < 0.0)
          amax_probe = std::min(amax_probe, -x[free[i]] / d[i]);
      Vec probe = x;
      for (std::size_t i = 0; i < free.size(); ++i)
        probe[free[i]] += amax_probe * d[i];
      stalled = qp_objective(p, probe) >= qp_objective(p, x) &&
                free_residual <= 1e-9 * scale;
    }
    if (d.size() == 0 || stalled || d.cwiseAbs().maxCoeff() <= 1e-15 * p.mass) {
      const double lam = fitted_multiplier(x, g, 0.0);
      double lam_free = lam;
      if (!free.empty()) {
        lam_free = 0.0;
        for (int k : free)
          lam_free += g[k];
        lam_free /= static_cast<double>(free.size());
      }
      int release = -1;
      for (Eigen::Index k = 0; k < n; ++k)
        if (active[k] && g[k] - lam_free < -mult_tol) {
          release = static_cast<int>(k);
          break;
        }
      if (release < 0)
        break;
      active[release] = false;
      continue;
    }
    double amax = 1.0;
    int block = -1;
    for (std::size_t i = 0; i < free.size(); ++i)
      if (d[i] < 0.0) {
        const double a = -x[free[i]] / d[i];
        if (a < amax) { // strict: ties keep the lowest index
          amax = a;
          block = free[i];
        }
      }
    for (std::size_t i = 0; i < free.size(); ++i)
      x[free[i]] += amax * d[i];
    if (block >= 0) {
      x[block] = 0.0;
      active[block] = true;
    }
  }
  if (it >= max_iter)
    throw ConvergenceError(
        fmt::format("QP active set: no convergence in {} iterations", max_iter));
  fix_mass(x, p.mass);
  rep.x = x;
  rep.objective = qp_objective(p, x);
  rep.kkt_residual = simplex_kkt_residual(x, p.S * x - p.b, 0.0);
  rep.iterations = it;
  return rep;
}

} // namespace aimkit::solvers
