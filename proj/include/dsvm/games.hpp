#pragma once

#include <map>
#include <memory>
#include <set>
#include <variant>
#include <vector>

#include "dsvm/data.hpp"
#include "dsvm/engine.hpp"
#include "dsvm/graph.hpp"

namespace dsvm {

struct LabelAttackSpec {
  std::vector<NodeId> compromised;
  double budget = 0.0;      // Q: flips allowed per compromised node (unit costs)
  double cost = 0.01;       // C_a
};

struct DataAttackSpec {
  std::vector<NodeId> compromised;
  double radius_sq = 0.0;   // C_delta: bound on ||delta_v||^2
  double cost = 0.01;       // C_a
};

// Best response of the label attacker at one node: the relaxed flip indicator
// theta (length 2N, paired as [1 - phi; phi]) against the learner's current r.
Vector attacker_label_step(const Vector& r, const ExpandedNodeData& expanded, int node_count,
                           int compromised_count, double c_l, const LabelAttackSpec& spec);

// Label-game objective term of node v: V C_l theta^T hinge - V_a C_a sum(phi).
double label_attack_objective(const Vector& r, const ExpandedNodeData& expanded,
                              const Vector& theta, int node_count, int compromised_count,
                              double c_l, double cost);

// Learner input for a DSVM round on the doubled rows with duals capped by
// V C_l theta.
LearnerInput label_learner_input(const Vector& theta, int node_count, double c_l);

// Best response of the data attacker at one node: the poisoning offset delta
// (length p) maximizing V_a C_l w^T delta - V_a C_a ||delta||_1 on the ball.
Vector attacker_data_step(const Vector& r, int compromised_count, double c_l,
                          const DataAttackSpec& spec);

// Learner input shifting f by V_a C_l [delta; 0].
LearnerInput data_learner_input(const Vector& delta, int compromised_count, double c_l);

class LabelFlipAttacker final : public Adversary {
 public:
  explicit LabelFlipAttacker(LabelAttackSpec spec);
  std::string name() const override { return "label"; }
  void configure(const Network& net, std::span<const NodeData> data, const EngineConfig& cfg,
                 std::vector<NodeSetup>& setup) override;
  bool attacks(NodeId v) const override { return compromised_.contains(v); }
  AttackDecision attack(int iteration, NodeId v, const NodeState& state,
                        LearnerInput& input) const override;

 private:
  LabelAttackSpec spec_;
  std::set<NodeId> compromised_;
  std::map<NodeId, ExpandedNodeData> expanded_;
  std::map<NodeId, double> node_cost_;
  int node_count_ = 0;
  double c_l_ = 1.0;
};

class DataPoisonAttacker final : public Adversary {
 public:
  explicit DataPoisonAttacker(DataAttackSpec spec);
  std::string name() const override { return "data"; }
  void configure(const Network& net, std::span<const NodeData> data, const EngineConfig& cfg,
                 std::vector<NodeSetup>& setup) override;
  bool attacks(NodeId v) const override { return compromised_.contains(v); }
  AttackDecision attack(int iteration, NodeId v, const NodeState& state,
                        LearnerInput& input) const override;

 private:
  DataAttackSpec spec_;
  std::set<NodeId> compromised_;
  double c_l_ = 1.0;
};

struct GameState {
  TrainResult result;
  // theta (label game) or delta (data game) per compromised node at the end.
  std::map<NodeId, Vector> decisions;
  // max - min of the global risk over the trailing window.
  double oscillation = 0.0;
};

using GameSpec = std::variant<LabelAttackSpec, DataAttackSpec>;

// Interleaved best-response dynamics: attacker steps on compromised nodes,
// learner steps on all nodes, then broadcast and multiplier update.
GameState run_game(const Network& net, std::span<const NodeData> data, const EngineConfig& cfg,
                   const GameSpec& spec, const AdversaryList& extra = {});

double trailing_oscillation(const TrainResult& result, int window = 10);

}  // namespace dsvm
