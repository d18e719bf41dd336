#include "dsvm/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "dsvm/error.hpp"
#include "dsvm/metrics.hpp"
#include "dsvm/solvers.hpp"

namespace dsvm {

namespace {

template <typename Fn>
void parallel_for(int workers, int count, Fn&& fn) {
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  const int threads = std::min(workers, count);
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (int i = t; i < count; i += threads) fn(i);
    });
  }
}

// Rows G_i = y_i [x_i; 1] of the (possibly doubled) training set.
Matrix signed_rows(const NodeData& data, bool expanded) {
  if (!expanded) return data.labels.asDiagonal() * data.augmented;
  const ExpandedNodeData ex = expand(data);
  return ex.y_hat.asDiagonal() * ex.x_hat;
}

double linf(const Vector& a, const Vector& b) { return (a - b).lpNorm<Eigen::Infinity>(); }

}  // namespace

void EngineConfig::validate() const {
  if (!(c_l >= 0.0) || !(eta > 0.0)) {
    throw Error(ErrorKind::invalid_parameter, "engine requires C_l >= 0 and eta > 0");
  }
  if (max_iters < 0 || qp_max_sweeps < 1 || attacker_period < 1 || !(qp_tol > 0.0) ||
      !(consensus_tol > 0.0)) {
    throw Error(ErrorKind::invalid_parameter, "invalid engine iteration settings");
  }
}

Vector u_inverse(double eta, int degree, int p) {
  if (degree < 1) {
    throw Error(ErrorKind::invalid_topology, "U_v is singular for a node without neighbors");
  }
  if (!(eta > 0.0)) throw Error(ErrorKind::invalid_parameter, "eta must be positive");
  Vector d(p + 1);
  d.head(p).setConstant(1.0 / (1.0 + 2.0 * eta * degree));
  d[p] = 1.0 / (2.0 * eta * degree);
  return d;
}

double predict(const Vector& r, const Vector& x) {
  if (r.size() != x.size() + 1) {
    throw Error(ErrorKind::dimension_mismatch, "model has " + std::to_string(r.size()) +
                                                   " entries for " + std::to_string(x.size()) +
                                                   " features");
  }
  const double g = x.dot(r.head(x.size())) + r[x.size()];
  return g >= 0.0 ? 1.0 : -1.0;
}

Vector predict_all(const Vector& r, const Matrix& features) {
  if (r.size() != features.cols() + 1) {
    throw Error(ErrorKind::dimension_mismatch, "model and feature dimensions differ");
  }
  const auto p = features.cols();
  Vector out(features.rows());
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    const double g = features.row(i).dot(r.head(p)) + r[p];
    out[i] = g >= 0.0 ? 1.0 : -1.0;
  }
  return out;
}

Vector centralized_svm(const LabeledSet& pooled, double c_l, double tol) {
  pooled.validate();
  const int n = pooled.size();
  const int p = pooled.dim();
  if ((pooled.labels.array() > 0).all() || (pooled.labels.array() < 0).all()) {
    throw Error(ErrorKind::degenerate_data, "centralized SVM needs both classes");
  }
  if (!(c_l > 0.0)) throw Error(ErrorKind::invalid_parameter, "C_l must be positive");

  const Vector& y = pooled.labels;
  const Matrix signed_x = y.asDiagonal() * pooled.features;
  const Matrix q = signed_x * signed_x.transpose();
  Vector alpha = Vector::Zero(n);
  Vector grad = -Vector::Ones(n);  // gradient of 1/2 a^T Q a - 1^T a
  const double cap = c_l;
  constexpr double kTau = 1e-12;

  const long max_iter = std::max(10000000L, 100L * n);
  for (long iter = 0; iter < max_iter; ++iter) {
    int i = -1;
    int j = -1;
    double g_max = -std::numeric_limits<double>::infinity();
    double g_min = std::numeric_limits<double>::infinity();
    for (int t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      const bool up = (y[t] > 0 && alpha[t] < cap) || (y[t] < 0 && alpha[t] > 0);
      const bool low = (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < cap);
      if (up && v > g_max) {
        g_max = v;
        i = t;
      }
      if (low && v < g_min) {
        g_min = v;
        j = t;
      }
    }
    if (i < 0 || j < 0 || g_max - g_min < tol) break;

    const double old_i = alpha[i];
    const double old_j = alpha[j];
    if (y[i] != y[j]) {
      double quad = q(i, i) + q(j, j) + 2.0 * q(i, j);
      if (quad <= 0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > cap) {
          alpha[i] = cap;
          alpha[j] = cap - diff;
        }
      } else if (alpha[j] > cap) {
        alpha[j] = cap;
        alpha[i] = cap + diff;
      }
    } else {
      double quad = q(i, i) + q(j, j) - 2.0 * q(i, j);
      if (quad <= 0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > cap) {
        if (alpha[i] > cap) {
          alpha[i] = cap;
          alpha[j] = sum - cap;
        }
      } else if (alpha[j] < 0) {
        alpha[j] = 0;
        alpha[i] = sum;
      }
      if (sum > cap) {
        if (alpha[j] > cap) {
          alpha[j] = cap;
          alpha[i] = sum - cap;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = sum;
      }
    }
    grad += q.col(i) * (alpha[i] - old_i) + q.col(j) * (alpha[j] - old_j);
  }

  // Bias from the free multipliers, or the midpoint of the feasible interval.
  double upper = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  int free_count = 0;
  for (int t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= cap) {
      if (y[t] < 0) upper = std::min(upper, yg); else lower = std::max(lower, yg);
    } else if (alpha[t] <= 0) {
      if (y[t] > 0) upper = std::min(upper, yg); else lower = std::max(lower, yg);
    } else {
      free_sum += yg;
      ++free_count;
    }
  }
  const double rho = free_count > 0 ? free_sum / free_count : 0.5 * (upper + lower);

  Vector r(p + 1);
  r.head(p) = signed_x.transpose() * alpha;
  r[p] = -rho;
  return r;
}

NodeState initial_state(const NodeData& data, const NodeSetup& setup, int real_degree) {
  const int p = data.dim();
  NodeState s;
  s.r = Vector::Zero(p + 1);
  s.alpha = Vector::Zero(p + 1);
  s.lambda = Vector::Zero(setup.expanded ? 2 * data.train_size() : data.train_size());
  s.inbox.assign(static_cast<std::size_t>(real_degree + setup.virtual_neighbors), Vector::Zero(p + 1));
  return s;
}

LocalStep local_round(const NodeState& state, const NodeData& data, const NodeSetup& setup,
                      const LearnerInput& input, const EngineConfig& cfg, int node_count) {
  const int p = data.dim();
  const int slots = static_cast<int>(state.inbox.size());
  const int real_degree = slots - setup.virtual_neighbors;
  const int degree = setup.virtual_in_degree ? slots : real_degree;
  const Vector d = u_inverse(cfg.eta, degree, p);

  Vector neighbor_sum = Vector::Zero(p + 1);
  for (const Vector& message : state.inbox) neighbor_sum += state.r + message;
  Vector f = 2.0 * state.alpha - cfg.eta * neighbor_sum;
  if (input.f_shift.size() > 0) f += input.f_shift;

  const Matrix rows = signed_rows(data, setup.expanded);
  const Eigen::Index n = rows.rows();

  BoxQP qp;
  if (input.caps.size() > 0) {
    if (input.caps.size() != n) throw Error(ErrorKind::dimension_mismatch, "cap vector length");
    qp.upper = input.caps;
  } else {
    qp.upper = Vector::Constant(n, node_count * setup.c_l);
  }
  const Matrix scaled = rows * d.asDiagonal();
  const Vector df = d.cwiseProduct(f);
  qp.quad = Matrix::Zero(n, n);
  qp.lin.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    qp.lin[i] = 1.0 + rows.row(i).dot(df);
    if (qp.upper[i] <= 0.0) continue;
    for (Eigen::Index j = i; j < n; ++j) {
      if (qp.upper[j] <= 0.0) continue;
      const double v = scaled.row(i).dot(rows.row(j));
      qp.quad(i, j) = v;
      qp.quad(j, i) = v;
    }
  }

  const BoxQPResult dual = solve_box_qp(qp, cfg.qp_tol, cfg.qp_max_sweeps, &state.lambda);

  Vector weighted = Vector::Zero(p + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (dual.lambda[i] != 0.0) weighted += dual.lambda[i] * rows.row(i).transpose();
  }
  LocalStep step;
  step.r = d.cwiseProduct(weighted - f);
  step.lambda = dual.lambda;
  step.qp_converged = dual.converged;
  return step;
}

void update_alpha(NodeState& state, double eta) {
  Vector disagreement = Vector::Zero(state.r.size());
  for (const Vector& message : state.inbox) disagreement += state.r - message;
  state.alpha += 0.5 * eta * disagreement;
}

std::vector<double> local_risks(std::span<const NodeState> states, std::span<const NodeData> data,
                                const AdversaryList& adversaries) {
  std::vector<double> risks(states.size());
  for (std::size_t v = 0; v < states.size(); ++v) {
    const auto node = static_cast<NodeId>(v);
    Vector r = states[v].r;
    const LabeledSet* test = &data[v].test;
    for (const auto& adv : adversaries) {
      adv->corrupt_model(node, r);
      if (const LabeledSet* override_set = adv->test_override(node)) test = override_set;
    }
    risks[v] = test->size() > 0 ? local_risk(test->labels, predict_all(r, test->features)) : 0.0;
  }
  return risks;
}

namespace {

RoundRecord evaluate(int iteration, const Network& net, std::span<const NodeState> states,
                     std::span<const NodeData> data, const AdversaryList& adversaries) {
  RoundRecord rec;
  rec.iteration = iteration;
  rec.node_risk = local_risks(states, data, adversaries);
  std::vector<int> sizes(states.size());
  for (std::size_t v = 0; v < states.size(); ++v) {
    const LabeledSet* test = &data[v].test;
    for (const auto& adv : adversaries) {
      if (const LabeledSet* o = adv->test_override(static_cast<NodeId>(v))) test = o;
    }
    sizes[v] = test->size();
  }
  rec.global_risk = weighted_global_risk(rec.node_risk, sizes);
  for (auto [u, v] : net.edges()) {
    rec.consensus_residual = std::max(rec.consensus_residual, linf(states[u].r, states[v].r));
  }
  return rec;
}

TrainResult train_single(std::span<const NodeData> data, const EngineConfig& cfg,
                         const AdversaryList& adversaries) {
  TrainResult result;
  NodeSetup setup;
  setup.c_l = cfg.c_l;
  result.states.push_back(initial_state(data[0], setup, 0));
  const Network single(1, {});
  result.trace.push_back(evaluate(0, single, result.states, data, adversaries));
  if (cfg.max_iters == 0) return result;
  result.states[0].r = centralized_svm(data[0].train, cfg.c_l);
  result.trace.push_back(evaluate(1, single, result.states, data, adversaries));
  result.converged = true;
  result.iterations = 1;
  return result;
}

}  // namespace

TrainResult train(const Network& net, std::span<const NodeData> data, const EngineConfig& cfg,
                  const AdversaryList& adversaries) {
  cfg.validate();
  const int nodes = net.size();
  if (static_cast<int>(data.size()) != nodes) {
    throw Error(ErrorKind::dimension_mismatch, "need one NodeData per network node");
  }
  const int p = data[0].dim();
  for (const auto& d : data) {
    if (d.dim() != p) throw Error(ErrorKind::dimension_mismatch, "nodes disagree on feature count");
  }
  if (nodes == 1) return train_single(data, cfg, adversaries);

  std::vector<NodeSetup> setup(static_cast<std::size_t>(nodes));
  for (auto& s : setup) s.c_l = cfg.c_l;
  for (const auto& adv : adversaries) adv->configure(net, data, cfg, setup);

  TrainResult result;
  result.states.reserve(static_cast<std::size_t>(nodes));
  for (NodeId v = 0; v < nodes; ++v) {
    result.states.push_back(initial_state(data[v], setup[v], net.degree(v)));
  }
  result.trace.push_back(evaluate(0, net, result.states, data, adversaries));

  std::vector<LearnerInput> inputs(static_cast<std::size_t>(nodes));
  std::vector<AttackDecision> decisions(static_cast<std::size_t>(nodes));
  std::map<NodeId, Vector> previous_decisions;
  std::vector<LocalStep> steps(static_cast<std::size_t>(nodes));
  std::vector<char> attacked(static_cast<std::size_t>(nodes), 0);
  bool any_attacker = false;
  for (NodeId v = 0; v < nodes; ++v) {
    for (const auto& adv : adversaries) {
      if (adv->attacks(v)) attacked[v] = 1;
    }
    any_attacker = any_attacker || attacked[v];
  }
  double decision_change = any_attacker ? std::numeric_limits<double>::infinity() : 0.0;

  for (int t = 0; t < cfg.max_iters; ++t) {
    RoundRecord rec;
    // Attacker best responses against the current r.
    if (any_attacker && t % cfg.attacker_period == 0) {
      parallel_for(cfg.workers, nodes, [&](int v) {
        if (!attacked[v]) return;
        for (const auto& adv : adversaries) {
          if (adv->attacks(v)) decisions[v] = adv->attack(t, v, result.states[v], inputs[v]);
        }
      });
      decision_change = 0.0;
      for (NodeId v = 0; v < nodes; ++v) {
        if (!attacked[v]) continue;
        rec.attacker_objective += decisions[v].objective;
        auto it = previous_decisions.find(v);
        if (it == previous_decisions.end() || it->second.size() != decisions[v].decision.size()) {
          decision_change = std::numeric_limits<double>::infinity();
        } else {
          decision_change = std::max(decision_change, linf(it->second, decisions[v].decision));
        }
        previous_decisions[v] = decisions[v].decision;
      }
    }

    // Learner steps.
    parallel_for(cfg.workers, nodes, [&](int v) {
      steps[v] = local_round(result.states[v], data[v], setup[v], inputs[v], cfg, nodes);
      for (const auto& adv : adversaries) adv->perturb_state(t, v, steps[v].r);
    });

    double change = 0.0;
    for (NodeId v = 0; v < nodes; ++v) {
      change = std::max(change, linf(steps[v].r, result.states[v].r));
      result.states[v].r = std::move(steps[v].r);
      result.states[v].lambda = std::move(steps[v].lambda);
      if (!steps[v].qp_converged) ++rec.qp_unconverged;
    }

    // Broadcast r, then the multiplier update on round t+1 messages.
    for (NodeId v = 0; v < nodes; ++v) {
      const auto& nbrs = net.neighbors(v);
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        const NodeId u = nbrs[k];
        Vector message = result.states[u].r;
        for (const auto& adv : adversaries) adv->filter_message(t, u, v, message);
        result.states[v].inbox[k] = std::move(message);
      }
      if (setup[v].virtual_neighbors > 0) {
        std::span<Vector> slots(result.states[v].inbox.data() + nbrs.size(),
                                static_cast<std::size_t>(setup[v].virtual_neighbors));
        for (const auto& adv : adversaries) adv->virtual_messages(t, v, result.states[v].r, slots);
      }
    }
    parallel_for(cfg.workers, nodes, [&](int v) { update_alpha(result.states[v], cfg.eta); });

    RoundRecord eval = evaluate(t + 1, net, result.states, data, adversaries);
    eval.change = change;
    eval.attacker_objective = rec.attacker_objective;
    eval.decision_change = any_attacker ? decision_change : 0.0;
    eval.qp_unconverged = rec.qp_unconverged;
    result.qp_unconverged += rec.qp_unconverged;
    result.trace.push_back(std::move(eval));
    result.iterations = t + 1;

    const RoundRecord& last = result.trace.back();
    if (last.consensus_residual < cfg.consensus_tol && change < cfg.consensus_tol &&
        (!any_attacker || decision_change < cfg.decision_tol)) {
      result.converged = true;
      break;
    }
  }
  result.decisions = std::move(previous_decisions);
  return result;
}

}  // namespace dsvm
