#include "dsvm/injectors.hpp"

#include <algorithm>

#include "dsvm/error.hpp"

namespace dsvm {

namespace {

constexpr std::uint64_t kCaptureTag = 0x63617074ULL;
constexpr std::uint64_t kSybilTag = 0x737962ULL;
constexpr std::uint64_t kMitmTag = 0x6d69746dULL;

std::set<NodeId> checked_nodes(const std::vector<NodeId>& nodes, const Network& net) {
  std::set<NodeId> out;
  for (NodeId v : nodes) {
    if (v < 0 || v >= net.size()) {
      throw Error(ErrorKind::invalid_node, "target node " + std::to_string(v) + " not in network");
    }
    out.insert(v);
  }
  return out;
}

void check_magnitude(double magnitude) {
  if (!(magnitude >= 0.0)) throw Error(ErrorKind::invalid_parameter, "noise magnitude R must be >= 0");
}

}  // namespace

NetAttackKind parse_net_attack_kind(const std::string& text) {
  if (text == "node-capture" || text == "capture") return NetAttackKind::node_capture;
  if (text == "sybil") return NetAttackKind::sybil;
  if (text == "mitm") return NetAttackKind::mitm;
  throw Error(ErrorKind::config, "unknown network attack kind '" + text + "'");
}

const char* to_string(NetAttackKind kind) {
  switch (kind) {
    case NetAttackKind::node_capture: return "node-capture";
    case NetAttackKind::sybil: return "sybil";
    case NetAttackKind::mitm: return "mitm";
  }
  return "unknown";
}

Vector capture_perturb(const Vector& r, double magnitude, Rng& rng) {
  check_magnitude(magnitude);
  if (magnitude == 0.0) return r;
  Vector out = r;
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] += rng.uniform(0.0, magnitude);
  return out;
}

Vector injected_noise(std::uint64_t seed, std::uint64_t tag, std::int64_t a, std::int64_t b,
                      int iteration, Eigen::Index size, double magnitude) {
  Rng rng(mix_seed(seed, tag, static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b),
                   static_cast<std::uint64_t>(iteration)));
  Vector u(size);
  for (Eigen::Index i = 0; i < size; ++i) u[i] = rng.uniform(0.0, magnitude);
  return u;
}

NodeCaptureInjector::NodeCaptureInjector(NetAttackSpec spec) : spec_(std::move(spec)) {
  check_magnitude(spec_.magnitude);
}

void NodeCaptureInjector::configure(const Network& net, std::span<const NodeData>,
                                    const EngineConfig&, std::vector<NodeSetup>&) {
  targets_ = checked_nodes(spec_.nodes, net);
}

void NodeCaptureInjector::perturb_state(int iteration, NodeId v, Vector& r) const {
  if (spec_.magnitude == 0.0 || !targets_.contains(v)) return;
  r += injected_noise(spec_.seed, kCaptureTag, v, 0, iteration, r.size(), spec_.magnitude);
}

SybilInjector::SybilInjector(NetAttackSpec spec) : spec_(std::move(spec)) {
  check_magnitude(spec_.magnitude);
}

void SybilInjector::configure(const Network& net, std::span<const NodeData>, const EngineConfig&,
                              std::vector<NodeSetup>& setup) {
  const std::set<NodeId> targets = checked_nodes(spec_.nodes, net);
  // A noiseless Sybil is no attack at all; leave the topology untouched.
  if (spec_.magnitude == 0.0) return;
  for (NodeId v : targets) {
    slot_[v] = static_cast<std::size_t>(setup[v].virtual_neighbors);
    setup[v].virtual_neighbors += 1;
    setup[v].virtual_in_degree = spec_.sybil_in_degree;
  }
}

void SybilInjector::virtual_messages(int iteration, NodeId v, const Vector& r,
                                     std::span<Vector> slots) const {
  auto it = slot_.find(v);
  if (it == slot_.end()) return;
  Vector& message = slots[it->second];
  message = r;
  if (spec_.magnitude > 0.0) {
    message += injected_noise(spec_.seed, kSybilTag, v, 0, iteration, r.size(), spec_.magnitude);
  }
}

MitmInjector::MitmInjector(NetAttackSpec spec) : spec_(std::move(spec)) {
  check_magnitude(spec_.magnitude);
}

void MitmInjector::configure(const Network& net, std::span<const NodeData>, const EngineConfig&,
                             std::vector<NodeSetup>&) {
  for (auto [u, v] : spec_.edges) {
    if (u < 0 || v < 0 || u >= net.size() || v >= net.size() || !net.adjacent(u, v)) {
      throw Error(ErrorKind::invalid_edge, "mitm edge (" + std::to_string(u) + "," +
                                               std::to_string(v) + ") is not in the network");
    }
    edges_.insert({std::min(u, v), std::max(u, v)});
  }
}

void MitmInjector::filter_message(int iteration, NodeId from, NodeId to, Vector& message) const {
  if (spec_.magnitude == 0.0 || !edges_.contains({std::min(from, to), std::max(from, to)})) return;
  // Independent draws per direction.
  message += injected_noise(spec_.seed, kMitmTag, from, to, iteration, message.size(), spec_.magnitude);
}

std::shared_ptr<Adversary> make_net_injector(const NetAttackSpec& spec) {
  switch (spec.kind) {
    case NetAttackKind::node_capture: return std::make_shared<NodeCaptureInjector>(spec);
    case NetAttackKind::sybil: return std::make_shared<SybilInjector>(spec);
    case NetAttackKind::mitm: return std::make_shared<MitmInjector>(spec);
  }
  throw Error(ErrorKind::config, "unknown network attack kind");
}

TestingVariant parse_testing_variant(const std::string& text) {
  if (text == "flip-label") return TestingVariant::flip_label;
  if (text == "shift-x") return TestingVariant::shift_x;
  if (text == "negate-r") return TestingVariant::negate_r;
  throw Error(ErrorKind::config, "unknown testing attack variant '" + text + "'");
}

const char* to_string(TestingVariant variant) {
  switch (variant) {
    case TestingVariant::flip_label: return "flip-label";
    case TestingVariant::shift_x: return "shift-x";
    case TestingVariant::negate_r: return "negate-r";
  }
  return "unknown";
}

LabeledSet testing_attack(const LabeledSet& test, const TestingAttackSpec& spec) {
  LabeledSet out = test;
  switch (spec.variant) {
    case TestingVariant::flip_label:
      out.labels = -test.labels;
      break;
    case TestingVariant::shift_x:
      if (spec.shift.size() != test.dim()) {
        throw Error(ErrorKind::dimension_mismatch, "shift-x offset has wrong dimension");
      }
      out.features = test.features.rowwise() - spec.shift.transpose();
      break;
    case TestingVariant::negate_r:
      break;
  }
  return out;
}

Vector testing_attack(const Vector& r, const TestingAttackSpec& spec) {
  return spec.variant == TestingVariant::negate_r ? Vector(-r) : r;
}

TestingAttack::TestingAttack(TestingAttackSpec spec) : spec_(std::move(spec)) {}

void TestingAttack::configure(const Network& net, std::span<const NodeData> data,
                              const EngineConfig&, std::vector<NodeSetup>&) {
  targets_ = checked_nodes(spec_.targets, net);
  if (spec_.variant == TestingVariant::negate_r) return;
  for (NodeId v : targets_) corrupted_.emplace(v, testing_attack(data[v].test, spec_));
}

void TestingAttack::corrupt_model(NodeId v, Vector& r) const {
  if (spec_.variant == TestingVariant::negate_r && targets_.contains(v)) r = -r;
}

const LabeledSet* TestingAttack::test_override(NodeId v) const {
  auto it = corrupted_.find(v);
  return it == corrupted_.end() ? nullptr : &it->second;
}

ModelAttack::ModelAttack(ModelAttackSpec spec) : spec_(std::move(spec)) {
  if (!(spec_.c_l >= 0.0)) throw Error(ErrorKind::invalid_parameter, "overridden C_l must be >= 0");
}

void ModelAttack::configure(const Network& net, std::span<const NodeData>, const EngineConfig&,
                            std::vector<NodeSetup>& setup) {
  for (NodeId v : checked_nodes(spec_.targets, net)) setup[v].c_l = spec_.c_l;
}

std::vector<double> model_attack(const ModelAttackSpec& spec, int node_count, double c_l) {
  std::vector<double> out(static_cast<std::size_t>(node_count), c_l);
  for (NodeId v : spec.targets) {
    if (v < 0 || v >= node_count) throw Error(ErrorKind::invalid_node, "model attack target out of range");
    out[v] = spec.c_l;
  }
  return out;
}

}  // namespace dsvm
