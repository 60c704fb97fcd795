#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace stabex {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Right-hand side f(u, t) of u' = f(u, t).
using RhsFunction = std::function<Vector(const Vector&, double)>;
/// Jacobian df/du evaluated at (u, t).
using JacobianFunction = std::function<Matrix(const Vector&, double)>;

/// An initial value problem u' = f(u, t), u(0) = u0 on [0, T].
///
/// The rhs must be callable concurrently from several threads; every problem
/// shipped with the library is a pure function of its arguments.
struct OdeProblem {
  std::size_t dimension = 0;
  RhsFunction rhs;
  JacobianFunction jacobian;  // may be empty
  Vector initial;
  double final_time = 0.0;
  std::optional<double> spectral_hint;  // |dominant eigenvalue|, if known
  bool autonomous = true;               // f does not depend on t

  [[nodiscard]] bool has_jacobian() const { return static_cast<bool>(jacobian); }

  /// Throws std::invalid_argument when the problem is malformed.
  void validate() const;
};

/// Max-norm. Every residual and error measurement in the library uses it.
inline double max_norm(const Vector& v) {
  return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
}

inline bool all_finite(const Vector& v) { return v.allFinite(); }

enum class StepKind { regular, stabilizing };

const char* to_string(StepKind kind);
StepKind step_kind_from_string(const std::string& text);

struct TrajectoryNode {
  double t = 0.0;
  Vector state;
  double step = 0.0;  // k_n = t_n - t_{n-1}; zero for the initial node
  StepKind kind = StepKind::regular;
  int iterations = 0;
  double residual = 0.0;  // continuous residual norm on (t_{n-1}, t_n]
};

/// Piecewise linear (cG(1)) or piecewise constant (Euler) discrete solution.
/// The first node is (0, u0).
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(Vector initial, double t0 = 0.0);

  void append(TrajectoryNode node);

  [[nodiscard]] const std::vector<TrajectoryNode>& nodes() const { return nodes_; }
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  [[nodiscard]] bool empty() const { return nodes_.empty(); }
  [[nodiscard]] const TrajectoryNode& back() const { return nodes_.back(); }
  [[nodiscard]] const TrajectoryNode& operator[](std::size_t i) const { return nodes_[i]; }

  [[nodiscard]] std::size_t count(StepKind kind) const;

 private:
  std::vector<TrajectoryNode> nodes_;
};

}  // namespace stabex
