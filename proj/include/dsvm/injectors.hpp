#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dsvm/engine.hpp"
#include "dsvm/graph.hpp"
#include "dsvm/rng.hpp"

namespace dsvm {

enum class NetAttackKind { node_capture, sybil, mitm };

NetAttackKind parse_net_attack_kind(const std::string& text);
const char* to_string(NetAttackKind kind);

struct NetAttackSpec {
  NetAttackKind kind = NetAttackKind::node_capture;
  std::vector<NodeId> nodes;  // capture / sybil targets
  std::vector<Edge> edges;    // mitm targets
  double magnitude = 0.0;     // R: noise coordinates ~ Uniform[0, R]
  std::uint64_t seed = 0;
  // Whether a Sybil's virtual neighbor is counted in |B_v| (and hence U_v).
  bool sybil_in_degree = true;
};

// r + u with u_i ~ Uniform[0, R].
Vector capture_perturb(const Vector& r, double magnitude, Rng& rng);

// Noise vector as a pure function of (seed, stream tag, a, b, iteration).
Vector injected_noise(std::uint64_t seed, std::uint64_t tag, std::int64_t a, std::int64_t b,
                      int iteration, Eigen::Index size, double magnitude);

class NodeCaptureInjector final : public Adversary {
 public:
  explicit NodeCaptureInjector(NetAttackSpec spec);
  std::string name() const override { return "node-capture"; }
  void configure(const Network& net, std::span<const NodeData> data, const EngineConfig& cfg,
                 std::vector<NodeSetup>& setup) override;
  void perturb_state(int iteration, NodeId v, Vector& r) const override;

 private:
  NetAttackSpec spec_;
  std::set<NodeId> targets_;
};

class SybilInjector final : public Adversary {
 public:
  explicit SybilInjector(NetAttackSpec spec);
  std::string name() const override { return "sybil"; }
  void configure(const Network& net, std::span<const NodeData> data, const EngineConfig& cfg,
                 std::vector<NodeSetup>& setup) override;
  void virtual_messages(int iteration, NodeId v, const Vector& r,
                        std::span<Vector> slots) const override;

 private:
  NetAttackSpec spec_;
  std::map<NodeId, std::size_t> slot_;
};

class MitmInjector final : public Adversary {
 public:
  explicit MitmInjector(NetAttackSpec spec);
  std::string name() const override { return "mitm"; }
  void configure(const Network& net, std::span<const NodeData> data, const EngineConfig& cfg,
                 std::vector<NodeSetup>& setup) override;
  void filter_message(int iteration, NodeId from, NodeId to, Vector& message) const override;

 private:
  NetAttackSpec spec_;
  std::set<Edge> edges_;
};

std::shared_ptr<Adversary> make_net_injector(const NetAttackSpec& spec);

enum class TestingVariant { flip_label, shift_x, negate_r };

TestingVariant parse_testing_variant(const std::string& text);
const char* to_string(TestingVariant variant);

struct TestingAttackSpec {
  TestingVariant variant = TestingVariant::negate_r;
  std::vector<NodeId> targets;
  Vector shift;  // delta for shift-x; x is replaced by x - delta
};

// Evaluation-time corruption of a test set (flip-label, shift-x); negate-r
// leaves the test set alone.
LabeledSet testing_attack(const LabeledSet& test, const TestingAttackSpec& spec);
// Model corruption for negate-r: returns -r; other variants return r.
Vector testing_attack(const Vector& r, const TestingAttackSpec& spec);

class TestingAttack final : public Adversary {
 public:
  explicit TestingAttack(TestingAttackSpec spec);
  std::string name() const override { return "testing"; }
  void configure(const Network& net, std::span<const NodeData> data, const EngineConfig& cfg,
                 std::vector<NodeSetup>& setup) override;
  void corrupt_model(NodeId v, Vector& r) const override;
  const LabeledSet* test_override(NodeId v) const override;

 private:
  TestingAttackSpec spec_;
  std::set<NodeId> targets_;
  std::map<NodeId, LabeledSet> corrupted_;
};

struct ModelAttackSpec {
  std::vector<NodeId> targets;
  double c_l = 0.0;
};

// Overrides C_l on the targeted nodes; C_l = 0 pins their duals to zero.
class ModelAttack final : public Adversary {
 public:
  explicit ModelAttack(ModelAttackSpec spec);
  std::string name() const override { return "model"; }
  void configure(const Network& net, std::span<const NodeData> data, const EngineConfig& cfg,
                 std::vector<NodeSetup>& setup) override;

 private:
  ModelAttackSpec spec_;
};

// Per-node C_l after applying a model attack.
std::vector<double> model_attack(const ModelAttackSpec& spec, int node_count, double c_l);

}  // namespace dsvm
