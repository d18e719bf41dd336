#include "dsvm/games.hpp"

#include <algorithm>

#include "dsvm/error.hpp"
#include "dsvm/solvers.hpp"

namespace dsvm {

namespace {

std::set<NodeId> checked_set(const std::vector<NodeId>& nodes, const Network& net) {
  std::set<NodeId> out;
  for (NodeId v : nodes) {
    if (v < 0 || v >= net.size()) {
      throw Error(ErrorKind::invalid_node, "compromised node " + std::to_string(v) + " not in network");
    }
    out.insert(v);
  }
  return out;
}

Vector hinge(const Vector& r, const ExpandedNodeData& expanded) {
  return (Vector::Ones(expanded.y_hat.size()) - expanded.y_hat.cwiseProduct(expanded.x_hat * r))
      .cwiseMax(0.0);
}

}  // namespace

Vector attacker_label_step(const Vector& r, const ExpandedNodeData& expanded, int node_count,
                           int compromised_count, double c_l, const LabelAttackSpec& spec) {
  if (r.size() != expanded.x_hat.cols()) {
    throw Error(ErrorKind::dimension_mismatch, "model and expanded data dimensions differ");
  }
  if (spec.budget < 0.0 || !(spec.cost > 0.0)) {
    throw Error(ErrorKind::invalid_parameter, "label attack needs Q >= 0 and C_a > 0");
  }
  const Eigen::Index n = expanded.y_hat.size() / 2;
  const Vector h = hinge(r, expanded);
  KnapsackLP lp;
  lp.gains = node_count * c_l * (h.tail(n) - h.head(n)) -
             Vector::Constant(n, compromised_count * spec.cost);
  lp.costs = Vector::Ones(n);
  lp.budget = spec.budget;
  return flips_to_theta(solve_flip_lp(lp));
}

double label_attack_objective(const Vector& r, const ExpandedNodeData& expanded,
                              const Vector& theta, int node_count, int compromised_count,
                              double c_l, double cost) {
  const Eigen::Index n = expanded.y_hat.size() / 2;
  return node_count * c_l * theta.dot(hinge(r, expanded)) -
         compromised_count * cost * theta.tail(n).sum();
}

LearnerInput label_learner_input(const Vector& theta, int node_count, double c_l) {
  LearnerInput input;
  input.caps = (node_count * c_l) * theta;
  return input;
}

Vector attacker_data_step(const Vector& r, int compromised_count, double c_l,
                          const DataAttackSpec& spec) {
  if (spec.radius_sq < 0.0 || !(spec.cost > 0.0)) {
    throw Error(ErrorKind::invalid_parameter, "data attack needs C_delta >= 0 and C_a > 0");
  }
  const Eigen::Index p = r.size() - 1;
  const Vector direction = compromised_count * c_l * r.head(p);
  return solve_poison_step(direction, compromised_count * spec.cost, spec.radius_sq);
}

LearnerInput data_learner_input(const Vector& delta, int compromised_count, double c_l) {
  LearnerInput input;
  if (delta.isZero(0.0)) return input;
  input.f_shift = Vector::Zero(delta.size() + 1);
  input.f_shift.head(delta.size()) = compromised_count * c_l * delta;
  return input;
}

LabelFlipAttacker::LabelFlipAttacker(LabelAttackSpec spec) : spec_(std::move(spec)) {}

void LabelFlipAttacker::configure(const Network& net, std::span<const NodeData> data,
                                  const EngineConfig& cfg, std::vector<NodeSetup>& setup) {
  compromised_ = checked_set(spec_.compromised, net);
  node_count_ = net.size();
  c_l_ = cfg.c_l;
  for (NodeId v : compromised_) {
    expanded_.emplace(v, expand(data[v]));
    setup[v].expanded = true;
    node_cost_[v] = setup[v].c_l;
  }
}

AttackDecision LabelFlipAttacker::attack(int /*iteration*/, NodeId v, const NodeState& state,
                                         LearnerInput& input) const {
  const auto& ex = expanded_.at(v);
  const int va = static_cast<int>(compromised_.size());
  AttackDecision out;
  out.decision = attacker_label_step(state.r, ex, node_count_, va, c_l_, spec_);
  out.objective = label_attack_objective(state.r, ex, out.decision, node_count_, va, c_l_, spec_.cost);
  input = label_learner_input(out.decision, node_count_, node_cost_.at(v));
  return out;
}

DataPoisonAttacker::DataPoisonAttacker(DataAttackSpec spec) : spec_(std::move(spec)) {}

void DataPoisonAttacker::configure(const Network& net, std::span<const NodeData> /*data*/,
                                   const EngineConfig& cfg, std::vector<NodeSetup>& /*setup*/) {
  compromised_ = checked_set(spec_.compromised, net);
  c_l_ = cfg.c_l;
}

AttackDecision DataPoisonAttacker::attack(int /*iteration*/, NodeId /*v*/, const NodeState& state,
                                          LearnerInput& input) const {
  const int va = static_cast<int>(compromised_.size());
  AttackDecision out;
  out.decision = attacker_data_step(state.r, va, c_l_, spec_);
  const Eigen::Index p = state.r.size() - 1;
  out.objective = poison_objective(va * c_l_ * state.r.head(p), va * spec_.cost, out.decision);
  input = data_learner_input(out.decision, va, c_l_);
  return out;
}

double trailing_oscillation(const TrainResult& result, int window) {
  if (result.trace.empty()) return 0.0;
  const std::size_t span = std::min<std::size_t>(static_cast<std::size_t>(std::max(window, 1)),
                                                 result.trace.size());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (auto it = result.trace.end() - static_cast<std::ptrdiff_t>(span); it != result.trace.end(); ++it) {
    lo = std::min(lo, it->global_risk);
    hi = std::max(hi, it->global_risk);
  }
  return hi - lo;
}

GameState run_game(const Network& net, std::span<const NodeData> data, const EngineConfig& cfg,
                   const GameSpec& spec, const AdversaryList& extra) {
  AdversaryList adversaries;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LabelAttackSpec>) {
          adversaries.push_back(std::make_shared<LabelFlipAttacker>(s));
        } else {
          adversaries.push_back(std::make_shared<DataPoisonAttacker>(s));
        }
      },
      spec);
  adversaries.insert(adversaries.end(), extra.begin(), extra.end());
  GameState game;
  game.result = train(net, data, cfg, adversaries);
  game.decisions = game.result.decisions;
  game.oscillation = trailing_oscillation(game.result);
  return game;
}

}  // namespace dsvm
