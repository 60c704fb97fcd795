#include "stabex/ode.hpp"

#include <algorithm>
#include <cmath>

namespace stabex {

void OdeProblem::validate() const {
  if (dimension < 1) throw std::invalid_argument("OdeProblem: dimension must be >= 1");
  if (!rhs) throw std::invalid_argument("OdeProblem: missing right-hand side");
  if (static_cast<std::size_t>(initial.size()) != dimension)
    throw std::invalid_argument("OdeProblem: initial state has wrong dimension");
  if (!(final_time > 0.0) || !std::isfinite(final_time))
    throw std::invalid_argument("OdeProblem: final time must be positive");
  if (spectral_hint && !(*spectral_hint > 0.0))
    throw std::invalid_argument("OdeProblem: spectral hint must be positive");
}

const char* to_string(StepKind kind) {
  switch (kind) {
    case StepKind::regular:
      return "regular";
    case StepKind::stabilizing:
      return "stabilizing";
  }
  return "regular";
}

StepKind step_kind_from_string(const std::string& text) {
  if (text == "regular") return StepKind::regular;
  if (text == "stabilizing") return StepKind::stabilizing;
  throw std::invalid_argument("unknown step kind: " + text);
}

Trajectory::Trajectory(Vector initial, double t0) {
  TrajectoryNode first;
  first.t = t0;
  first.state = std::move(initial);
  nodes_.push_back(std::move(first));
}

void Trajectory::append(TrajectoryNode node) {
  if (!nodes_.empty() && !(node.t > nodes_.back().t))
    throw std::logic_error("Trajectory: node times must be strictly increasing");
  nodes_.push_back(std::move(node));
}

std::size_t Trajectory::count(StepKind kind) const {
  // The initial node is not a step.
  if (nodes_.empty()) return 0;
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin() + 1, nodes_.end(),
                    [kind](const TrajectoryNode& n) { return n.kind == kind; }));
}

}  // namespace stabex
