#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "paradoxlab/graph.hpp"

namespace paradoxlab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Symmetric 2x2 matrix.
struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double det() const { return xx * yy - xy * xy; }
};

struct GaussianComponent {
  Vec2 mean;
  Sym2 cov;
  double weight = 0.0;
};

struct GmmModel {
  std::array<GaussianComponent, 2> components;
  double log_likelihood = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> ll_history;  // log-likelihood after each E-step
};

/// One row per node with an own attribute and at least one attributed
/// neighbor: x = own attribute, y = mean attribute of attributed neighbors.
struct PlanePoints {
  std::vector<Vec2> points;
  std::vector<NodeId> node_of_row;
};

/// Throws NumericError when no node is eligible.
PlanePoints build_plane_points(const AttributedGraph& g);

struct GmmOptions {
  double tol = 1e-7;          // stop when log-likelihood improves by less
  std::size_t max_iter = 500;
  std::size_t restarts = 8;   // random restarts, best likelihood kept
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  /// When set, a single run initialized at these means (no random restarts).
  std::optional<std::array<Vec2, 2>> init_means;
};

/// Two-component full-covariance EM. Per-point responsibilities are computed
/// with log-sum-exp; M-steps add 1e-9 to the covariance diagonal. A restart
/// collapses (weight < 1e-6 or singular covariance) is discarded; if every
/// restart collapses a NumericError("degenerate component ...") is thrown.
/// Deterministic for fixed (points, options) at any worker count: the
/// log-likelihood is reduced with a fixed pairwise tree.
GmmModel fit_gmm_em(std::span<const Vec2> points, const GmmOptions& options = {});

/// sqrt((p - mean)^T cov^-1 (p - mean)).
double mahalanobis(Vec2 point, const GaussianComponent& comp);

enum class GroupLabel : std::uint8_t { kHappy = 0, kUnhappy = 1, kUnassigned = 2 };

const char* group_label_name(GroupLabel label);

/// Labels each point by the 2-standard-deviation (Mahalanobis radius) rule:
/// inside exactly one component's ellipse -> that component; inside both ->
/// the component with the higher posterior responsibility; inside neither ->
/// Unassigned. The component with the larger mean x is Happy, so labels do
/// not depend on component order.
std::vector<GroupLabel> demarcate(std::span<const Vec2> points, const GmmModel& model,
                                  double radius = 2.0);

/// Per-node labels (size g.node_count()); nodes without a plane row are
/// Unassigned.
std::vector<GroupLabel> labels_by_node(const AttributedGraph& g, const PlanePoints& plane,
                                       std::span<const GroupLabel> row_labels);

/// JSON document with means, covariances, weights and fit diagnostics at
/// full precision.
std::string gmm_to_json(const GmmModel& model);

}  // namespace paradoxlab
