#include "netalign/ot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "netalign/rng.hpp"

namespace netalign {
namespace {

constexpr double kLogDomainBelow = 0.01;  // eps under this switches to log space
constexpr double kPlanFloor = 1e-300;     // keeps log of a plan entry finite

void check_marginals(const Eigen::MatrixXd& cost, const Eigen::VectorXd& mu,
                     const Eigen::VectorXd& nu) {
  if (cost.rows() < 1 || cost.cols() < 1)
    throw std::invalid_argument("cost matrix must be nonempty");
  if (mu.size() != cost.rows() || nu.size() != cost.cols())
    throw std::invalid_argument("marginal sizes must match the cost matrix");
  if (!(mu.minCoeff() > 0.0) || !(nu.minCoeff() > 0.0))
    throw std::invalid_argument("marginals must be strictly positive");
  if (std::abs(mu.sum() - 1.0) > 1e-8 || std::abs(nu.sum() - 1.0) > 1e-8)
    throw std::invalid_argument("marginals must each sum to 1");
  if (!cost.allFinite())
    throw std::invalid_argument("cost matrix must be finite");
}

double plan_violation(const Eigen::MatrixXd& plan, const Eigen::VectorXd& mu,
                      const Eigen::VectorXd& nu) {
  double r = (plan.rowwise().sum() - mu).lpNorm<Eigen::Infinity>();
  double c = (plan.colwise().sum().transpose() - nu).lpNorm<Eigen::Infinity>();
  return std::max(r, c);
}

struct SinkhornState {
  Eigen::VectorXd u, v;  // multiplicative scalings carried between solves
};

// Projects an almost feasible plan onto the transport polytope: rows and
// columns that overshoot are scaled down, and the leftover deficit is spread
// as a rank-one patch. Marginals come out exact to machine precision and no
// entry goes negative, while the plan moves by at most the order of the
// violation it started with. This is what lets a run that stalled above the
// requested tolerance still hand back a strictly feasible plan.
void round_to_feasible(Eigen::MatrixXd& plan, const Eigen::VectorXd& mu,
                       const Eigen::VectorXd& nu) {
  if (!plan.allFinite()) return;
  Eigen::VectorXd rs = plan.rowwise().sum();
  for (Eigen::Index i = 0; i < plan.rows(); ++i)
    if (rs(i) > mu(i) && rs(i) > 0.0) plan.row(i) *= mu(i) / rs(i);
  Eigen::VectorXd cs = plan.colwise().sum();
  for (Eigen::Index j = 0; j < plan.cols(); ++j)
    if (cs(j) > nu(j) && cs(j) > 0.0) plan.col(j) *= nu(j) / cs(j);
  Eigen::VectorXd r = (mu - plan.rowwise().sum()).cwiseMax(0.0);
  Eigen::VectorXd s = (nu - plan.colwise().sum().transpose()).cwiseMax(0.0);
  const double deficit = s.sum();
  if (deficit > 0.0) plan.noalias() += r * (s.transpose() / deficit);
}

TransportPlan sinkhorn_plain(const Eigen::MatrixXd& cost,
                             const Eigen::VectorXd& mu,
                             const Eigen::VectorXd& nu, double eps, double tol,
                             int max_iter, SinkhornState* state) {
  const Eigen::Index n1 = cost.rows(), n2 = cost.cols();
  // Absorb row then column minima into the potentials: the kernel keeps an
  // exact 1 in every row and column, so no scaling update divides by zero
  // even when distant entries underflow.
  Eigen::MatrixXd shifted = cost.colwise() - cost.rowwise().minCoeff().eval();
  shifted.rowwise() -= shifted.colwise().minCoeff().eval();
  Eigen::MatrixXd K = (-shifted / eps).array().exp();

  Eigen::VectorXd u = Eigen::VectorXd::Ones(n1);
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n2);
  if (state && state->u.size() == n1 && state->v.size() == n2) {
    u = state->u;
    v = state->v;
  }

  Eigen::VectorXd Kv = K * v;
  bool converged = false;
  int it = 0;
  while (it < max_iter) {
    ++it;
    u = mu.cwiseQuotient(Kv);
    v = nu.cwiseQuotient(K.transpose() * u);
    Kv.noalias() = K * v;
    double viol = (u.cwiseProduct(Kv) - mu).lpNorm<Eigen::Infinity>();
    if (viol < tol) {
      converged = true;
      break;
    }
  }
  if (state) {
    state->u = u;
    state->v = v;
  }

  TransportPlan out;
  out.plan = u.asDiagonal() * K * v.asDiagonal();
  round_to_feasible(out.plan, mu, nu);
  out.converged = converged;
  out.iterations = it;
  out.marginal_violation = plan_violation(out.plan, mu, nu);
  return out;
}

Eigen::MatrixXd plan_from_potentials(const Eigen::MatrixXd& cost,
                                     const Eigen::VectorXd& f,
                                     const Eigen::VectorXd& g, double eps) {
  Eigen::MatrixXd log_plan = (-cost).colwise() + f;
  log_plan.rowwise() += g.transpose();
  return (log_plan / eps).array().exp();
}

TransportPlan sinkhorn_log(const Eigen::MatrixXd& cost,
                           const Eigen::VectorXd& mu,
                           const Eigen::VectorXd& nu, double eps_target,
                           double tol, int max_iter) {
  const Eigen::Index n1 = cost.rows(), n2 = cost.cols();
  Eigen::VectorXd log_mu = mu.array().log();
  Eigen::VectorXd log_nu = nu.array().log();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n1);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n2);

  // Stepped temperature: walk eps down geometrically and solve each stage
  // to a loose tolerance before tightening. Entering every stage near its
  // own solution is what keeps the final, poorly contracting stage in its
  // fast local regime; a fixed sweep count per stage does not.
  std::vector<double> stages;
  for (double e = 1.0; e > eps_target * (1.0 + 1e-9); e *= 0.5)
    stages.push_back(e);
  stages.push_back(eps_target);

  auto half_f = [&](double e) {
    for (Eigen::Index i = 0; i < n1; ++i) {
      Eigen::ArrayXd z = (g.transpose() - cost.row(i)).array() / e;
      double m = z.maxCoeff();
      f[i] = e * (log_mu[i] - (m + std::log((z - m).exp().sum())));
    }
  };
  auto half_g = [&](double e) {
    for (Eigen::Index j = 0; j < n2; ++j) {
      Eigen::ArrayXd z = (f - cost.col(j)).array() / e;
      double m = z.maxCoeff();
      g[j] = e * (log_nu[j] - (m + std::log((z - m).exp().sum())));
    }
  };
  auto sweep = [&](double e) {
    half_f(e);
    half_g(e);
  };

  // rows are satisfied exactly after the f half-sweep, so the row gap after
  // the g half-sweep is the whole residual
  auto row_gap = [&](double e) {
    return (plan_from_potentials(cost, f, g, e).rowwise().sum() - mu)
        .lpNorm<Eigen::Infinity>();
  };

  int total_it = 0;
  for (std::size_t s = 0; s + 1 < stages.size(); ++s) {
    // precision at a warm stage buys nothing, so leave on stagnation too
    double recent = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 200; ++it) {
      sweep(stages[s]);
      ++total_it;
      const double gap = row_gap(stages[s]);
      if (gap < std::max(tol, 1e-7)) break;
      if (it % 10 == 9) {
        if (gap > 0.9 * recent) break;
        recent = gap;
      }
    }
  }

  // Alternating sweeps stall near tight-eps optima when two assignments
  // trade mass around a cycle: the contraction factor approaches one and the
  // gap freezes just above tol. The fix is a Newton step on the semi-dual in
  // g. With rows satisfied exactly (fresh f half-sweep) the gradient is
  // nu - colsum and the Hessian is (1/eps)(diag(q) - P' diag(1/mu) P), which
  // is a small dense solve at these sizes and quadratically convergent. The
  // Hessian is singular along the constant shift, a pure gauge; a tiny ridge
  // makes the factorization definite and the shift component is harmless.
  // Every step is verified against the sweep metric and reverted if worse.
  // Deeply frozen instances (mass that would have to cross arcs whose
  // couplings underflow any useful contraction) cannot reach tol by local
  // moves at all; once the gap stops improving the loop leaves early and the
  // feasibility projection below seals the marginals instead.
  const bool can_polish = n2 <= 512;
  bool converged = false;
  double best_gap = std::numeric_limits<double>::infinity();
  int last_improve = 0;
  for (int it = 0; it < max_iter && !converged; ++it) {
    sweep(eps_target);
    ++total_it;
    double gap = row_gap(eps_target);
    if (gap < tol) {
      converged = true;
      break;
    }
    if (gap < 0.99 * best_gap) {
      best_gap = gap;
      last_improve = it;
    } else if (it - last_improve >= 50) {
      break;
    }
    if (can_polish && (it & 7) == 7) {
      const Eigen::VectorXd keep = g;
      half_f(eps_target);
      Eigen::MatrixXd plan = plan_from_potentials(cost, f, g, eps_target);
      Eigen::VectorXd q = plan.colwise().sum();
      Eigen::MatrixXd hess =
          Eigen::MatrixXd(q.asDiagonal()) -
          plan.transpose() * mu.cwiseInverse().asDiagonal() * plan;
      hess.diagonal().array() += 1e-12 * q.maxCoeff();
      Eigen::VectorXd delta =
          eps_target * hess.ldlt().solve((nu - q).eval());
      if (delta.allFinite()) {
        g += delta;
        sweep(eps_target);
        ++total_it;
        const double stepped = row_gap(eps_target);
        if (stepped < gap) {
          converged = stepped < tol;
          continue;
        }
      }
      g = keep;
      sweep(eps_target);
      ++total_it;
      converged = row_gap(eps_target) < tol;
    }
  }

  // converged reports whether the iteration itself met tol; the projection
  // then makes the returned plan feasible regardless, so marginal_violation
  // describes the plan actually handed back
  TransportPlan out;
  out.plan = plan_from_potentials(cost, f, g, eps_target);
  round_to_feasible(out.plan, mu, nu);
  out.converged = converged;
  out.iterations = total_it;
  out.marginal_violation = plan_violation(out.plan, mu, nu);
  return out;
}

TransportPlan sinkhorn_impl(const Eigen::MatrixXd& cost,
                            const Eigen::VectorXd& mu,
                            const Eigen::VectorXd& nu, double eps, double tol,
                            int max_iter, SinkhornState* state) {
  check_marginals(cost, mu, nu);
  if (eps <= 0.0) throw std::invalid_argument("eps must be > 0");
  if (tol <= 0.0) throw std::invalid_argument("tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (eps < kLogDomainBelow) return sinkhorn_log(cost, mu, nu, eps, tol, max_iter);
  return sinkhorn_plain(cost, mu, nu, eps, tol, max_iter, state);
}

void check_ot_config(const OTConfig& cfg) {
  if (cfg.epsilon <= 0.0) throw std::invalid_argument("epsilon must be > 0");
  if (cfg.prox_gamma <= 0.0) throw std::invalid_argument("prox_gamma must be > 0");
  if (cfg.outer_iters < 1) throw std::invalid_argument("outer_iters must be >= 1");
  if (cfg.sinkhorn_iters < 1) throw std::invalid_argument("sinkhorn_iters must be >= 1");
  if (cfg.sinkhorn_tol <= 0.0) throw std::invalid_argument("sinkhorn_tol must be > 0");
  if (cfg.outer_tol < 0.0) throw std::invalid_argument("outer_tol must be >= 0");
  if (cfg.hops < 0) throw std::invalid_argument("hops must be >= 0");
  if (cfg.anchor_bonus < 0.0) throw std::invalid_argument("anchor_bonus must be >= 0");
}

// Pure function of the cell index: breaks exact symmetries identically on
// every run and platform without consuming an RNG stream.
double cell_jitter(int i, int j) {
  std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
                      static_cast<std::uint32_t>(j);
  double u = static_cast<double>(mix64(key) >> 11) * 0x1.0p-53;
  return 1.0 + 1e-9 * (u - 0.5);
}

Eigen::MatrixXd jittered_uniform(int n1, int n2) {
  Eigen::MatrixXd t(n1, n2);
  double base = 1.0 / (static_cast<double>(n1) * n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) t(i, j) = base * cell_jitter(i, j);
  return t;
}

double plan_entropy_sum(const Eigen::MatrixXd& t) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < t.cols(); ++j)
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      double x = t(i, j);
      if (x > 0.0) acc += x * std::log(x);
    }
  return acc;
}

}  // namespace

TransportPlan sinkhorn(const Eigen::MatrixXd& cost, const Eigen::VectorXd& mu,
                       const Eigen::VectorXd& nu, double eps, double tol,
                       int max_iter) {
  return sinkhorn_impl(cost, mu, nu, eps, tol, max_iter, nullptr);
}

Eigen::MatrixXd rwr_cost(const AlignmentTask& task, const OTConfig& cfg) {
  check_ot_config(cfg);
  if (task.train_anchors.empty())
    throw std::invalid_argument("walk-descriptor cost needs at least one anchor");
  std::vector<int> src1, src2;
  src1.reserve(task.train_anchors.size());
  src2.reserve(task.train_anchors.size());
  for (const auto& [x, y] : task.train_anchors) {
    src1.push_back(x);
    src2.push_back(y);
  }
  Eigen::MatrixXd e1 = anchor_rwr_matrix(task.g1, src1, cfg.rwr);
  Eigen::MatrixXd e2 = anchor_rwr_matrix(task.g2, src2, cfg.rwr);
  for (Eigen::Index i = 0; i < e1.rows(); ++i) {
    double s = e1.row(i).sum();
    if (s > 0.0) e1.row(i) /= s;
  }
  for (Eigen::Index i = 0; i < e2.rows(); ++i) {
    double s = e2.row(i).sum();
    if (s > 0.0) e2.row(i) /= s;
  }
  Eigen::MatrixXd cost =
      (Eigen::MatrixXd::Ones(e1.rows(), e2.rows()) - cosine_rows(e1, e2))
          .cwiseMax(0.0);
  for (const auto& [x, y] : task.train_anchors)
    cost(x, y) = std::max(0.0, cost(x, y) - cfg.anchor_bonus);
  return cost;
}

AlignResult parrot_lite_align(const AlignmentTask& task, const OTConfig& cfg) {
  check_ot_config(cfg);
  const int n1 = task.g1.n, n2 = task.g2.n;
  Eigen::MatrixXd cost = rwr_cost(task, cfg);
  Eigen::VectorXd mu = Eigen::VectorXd::Constant(n1, 1.0 / n1);
  Eigen::VectorXd nu = Eigen::VectorXd::Constant(n2, 1.0 / n2);

  const double inner_eps = cfg.epsilon + cfg.prox_gamma;
  Eigen::MatrixXd T = jittered_uniform(n1, n2);
  SinkhornState state;
  AlignResult res;
  res.trace.push_back((cost.array() * T.array()).sum() +
                      cfg.epsilon * plan_entropy_sum(T));
  double prev = res.trace.back();
  for (int t = 0; t < cfg.outer_iters; ++t) {
    Eigen::MatrixXd prox_cost =
        cost - cfg.prox_gamma * T.cwiseMax(kPlanFloor).array().log().matrix();
    if (inner_eps < kLogDomainBelow) {
      T = sinkhorn_log(prox_cost, mu, nu, inner_eps, cfg.sinkhorn_tol,
                       cfg.sinkhorn_iters)
              .plan;
    } else {
      T = sinkhorn_plain(prox_cost, mu, nu, inner_eps, cfg.sinkhorn_tol,
                         cfg.sinkhorn_iters, &state)
              .plan;
    }
    double obj = (cost.array() * T.array()).sum() +
                 cfg.epsilon * plan_entropy_sum(T);
    res.trace.push_back(obj);
    ++res.iterations;
    if (std::abs(obj - prev) <= cfg.outer_tol * (1.0 + std::abs(obj))) {
      res.converged = true;
      break;
    }
    prev = obj;
  }
  res.scores = T;
  return res;
}

Eigen::MatrixXd multihop_intra_sim(const Graph& g, int hops) {
  if (hops < 0) throw std::invalid_argument("hops must be >= 0");
  if (g.n < 1) throw std::invalid_argument("graph must be nonempty");
  Eigen::MatrixXd feats;
  if (g.has_node_attrs()) {
    feats = g.node_attrs;
  } else {
    feats.resize(g.n, 2);
    feats.col(0) = degree_vector(g);
    feats.col(1).setOnes();
  }
  Eigen::SparseMatrix<double> walk = normalize_adjacency(g, Normalization::symmetric);

  auto normalized_gram = [](const Eigen::MatrixXd& f) {
    Eigen::MatrixXd fn = f;
    for (Eigen::Index i = 0; i < fn.rows(); ++i) {
      double norm = fn.row(i).norm();
      if (norm > 0.0) fn.row(i) /= norm;
    }
    return Eigen::MatrixXd(fn * fn.transpose());
  };

  Eigen::MatrixXd sim = normalized_gram(feats);
  for (int k = 1; k <= hops; ++k) {
    feats = walk * feats;
    sim += normalized_gram(feats);
  }
  sim /= static_cast<double>(hops + 1);
  for (const Edge& e : g.edges) {
    sim(e.u, e.v) += 1.0;
    sim(e.v, e.u) += 1.0;
  }
  double lo = sim.minCoeff(), hi = sim.maxCoeff();
  if (hi > lo) sim = (sim.array() - lo) / (hi - lo);
  return sim;
}

AlignResult gw_align(const AlignmentTask& task, const OTConfig& cfg) {
  check_ot_config(cfg);
  const int n1 = task.g1.n, n2 = task.g2.n;
  Eigen::MatrixXd a1 = multihop_intra_sim(task.g1, cfg.hops);
  Eigen::MatrixXd a2 = multihop_intra_sim(task.g2, cfg.hops);
  Eigen::VectorXd mu = Eigen::VectorXd::Constant(n1, 1.0 / n1);
  Eigen::VectorXd nu = Eigen::VectorXd::Constant(n2, 1.0 / n2);

  // Constant part of the structure gradient plus anchor discounts.
  Eigen::VectorXd sq1 = (a1.array() * a1.array()).matrix() * mu;
  Eigen::VectorXd sq2 = (a2.array() * a2.array()).matrix() * nu;
  Eigen::MatrixXd lin = Eigen::MatrixXd::Zero(n1, n2);
  lin.colwise() += sq1;
  lin.rowwise() += sq2.transpose();
  for (const auto& [x, y] : task.train_anchors) lin(x, y) -= cfg.anchor_bonus;

  const double inner_eps = cfg.epsilon + cfg.prox_gamma;
  Eigen::MatrixXd T = jittered_uniform(n1, n2);
  SinkhornState state;
  AlignResult res;

  Eigen::MatrixXd cross = a1 * (T * a2.transpose());
  auto objective = [&](const Eigen::MatrixXd& t, const Eigen::MatrixXd& m) {
    return (lin.array() * t.array()).sum() - 2.0 * (m.array() * t.array()).sum() +
           cfg.epsilon * plan_entropy_sum(t);
  };
  res.trace.push_back(objective(T, cross));
  double prev = res.trace.back();

  for (int t = 0; t < cfg.outer_iters; ++t) {
    Eigen::MatrixXd grad = lin - 2.0 * cross;
    Eigen::MatrixXd prox_cost =
        grad - cfg.prox_gamma * T.cwiseMax(kPlanFloor).array().log().matrix();
    if (inner_eps < kLogDomainBelow) {
      T = sinkhorn_log(prox_cost, mu, nu, inner_eps, cfg.sinkhorn_tol,
                       cfg.sinkhorn_iters)
              .plan;
    } else {
      T = sinkhorn_plain(prox_cost, mu, nu, inner_eps, cfg.sinkhorn_tol,
                         cfg.sinkhorn_iters, &state)
              .plan;
    }
    cross = a1 * (T * a2.transpose());
    double obj = objective(T, cross);
    res.trace.push_back(obj);
    ++res.iterations;
    if (std::abs(obj - prev) <= cfg.outer_tol * (1.0 + std::abs(obj))) {
      res.converged = true;
      break;
    }
    prev = obj;
  }
  res.scores = T;
  return res;
}

}  // namespace netalign
