#include "paradoxlab/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "paradoxlab/errors.hpp"
#include "paradoxlab/parallel.hpp"
#include "paradoxlab/paradox.hpp"
#include "paradoxlab/rng.hpp"
#include "paradoxlab/stats.hpp"

namespace paradoxlab {

namespace {

constexpr double kCovFloor = 1e-9;
constexpr double kWeightFloor = 1e-6;
constexpr double kLog2Pi = 1.8378770664093453;  // log(2*pi)

struct LogDensity {
  // cached terms of log N(x | mean, cov)
  Vec2 mean;
  double inv_xx, inv_xy, inv_yy;
  double log_norm;  // -log(2 pi) - 0.5 log det

  explicit LogDensity(const GaussianComponent& c) {
    const double det = c.cov.det();
    if (!(det > 0.0)) throw NumericError("degenerate component: singular covariance");
    mean = c.mean;
    inv_xx = c.cov.yy / det;
    inv_xy = -c.cov.xy / det;
    inv_yy = c.cov.xx / det;
    log_norm = -kLog2Pi - 0.5 * std::log(det);
  }

  double operator()(Vec2 p) const {
    const double dx = p.x - mean.x;
    const double dy = p.y - mean.y;
    const double q = dx * (inv_xx * dx + inv_xy * dy) + dy * (inv_xy * dx + inv_yy * dy);
    return log_norm - 0.5 * q;
  }
};

struct EmScratch {
  std::vector<double> resp0;     // responsibility of component 0 per point
  std::vector<double> point_ll;  // log p(x_i) per point
};

// One E-step: fills responsibilities and per-point log-likelihoods, returns
// the total log-likelihood via a fixed pairwise reduction.
double e_step(std::span<const Vec2> points, const GmmModel& model, EmScratch& scratch,
              std::size_t workers) {
  const LogDensity d0(model.components[0]);
  const LogDensity d1(model.components[1]);
  const double lw0 = std::log(model.components[0].weight);
  const double lw1 = std::log(model.components[1].weight);

  parallel_chunks(points.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double a = lw0 + d0(points[i]);
      const double b = lw1 + d1(points[i]);
      const double hi = std::max(a, b);
      const double sum = std::exp(a - hi) + std::exp(b - hi);
      scratch.point_ll[i] = hi + std::log(sum);
      scratch.resp0[i] = std::exp(a - hi) / sum;
    }
  });
  return pairwise_sum(scratch.point_ll);
}

void m_step(std::span<const Vec2> points, const EmScratch& scratch, GmmModel& model) {
  const std::size_t n = points.size();
  double n0 = 0.0, n1 = 0.0;
  Vec2 s0{}, s1{};
  for (std::size_t i = 0; i < n; ++i) {
    const double r0 = scratch.resp0[i];
    const double r1 = 1.0 - r0;
    n0 += r0;
    n1 += r1;
    s0.x += r0 * points[i].x;
    s0.y += r0 * points[i].y;
    s1.x += r1 * points[i].x;
    s1.y += r1 * points[i].y;
  }
  if (n0 < kWeightFloor * n || n1 < kWeightFloor * n) {
    throw NumericError("degenerate component: weight below 1e-6 (n0=" + std::to_string(n0) +
                       ", n1=" + std::to_string(n1) + ")");
  }
  GaussianComponent& c0 = model.components[0];
  GaussianComponent& c1 = model.components[1];
  c0.weight = n0 / static_cast<double>(n);
  c1.weight = n1 / static_cast<double>(n);
  c0.mean = {s0.x / n0, s0.y / n0};
  c1.mean = {s1.x / n1, s1.y / n1};

  Sym2 cov0{}, cov1{};
  for (std::size_t i = 0; i < n; ++i) {
    const double r0 = scratch.resp0[i];
    const double r1 = 1.0 - r0;
    {
      const double dx = points[i].x - c0.mean.x;
      const double dy = points[i].y - c0.mean.y;
      cov0.xx += r0 * dx * dx;
      cov0.xy += r0 * dx * dy;
      cov0.yy += r0 * dy * dy;
    }
    {
      const double dx = points[i].x - c1.mean.x;
      const double dy = points[i].y - c1.mean.y;
      cov1.xx += r1 * dx * dx;
      cov1.xy += r1 * dx * dy;
      cov1.yy += r1 * dy * dy;
    }
  }
  c0.cov = {cov0.xx / n0 + kCovFloor, cov0.xy / n0, cov0.yy / n0 + kCovFloor};
  c1.cov = {cov1.xx / n1 + kCovFloor, cov1.xy / n1, cov1.yy / n1 + kCovFloor};
  if (!(c0.cov.det() > 0.0) || !(c1.cov.det() > 0.0)) {
    throw NumericError("degenerate component: singular covariance after regularization");
  }
}

Sym2 data_covariance(std::span<const Vec2> points) {
  const std::size_t n = points.size();
  Vec2 m{};
  for (const Vec2 p : points) {
    m.x += p.x;
    m.y += p.y;
  }
  m.x /= static_cast<double>(n);
  m.y /= static_cast<double>(n);
  Sym2 cov{};
  for (const Vec2 p : points) {
    const double dx = p.x - m.x;
    const double dy = p.y - m.y;
    cov.xx += dx * dx;
    cov.xy += dx * dy;
    cov.yy += dy * dy;
  }
  cov.xx = cov.xx / static_cast<double>(n) + kCovFloor;
  cov.xy = cov.xy / static_cast<double>(n);
  cov.yy = cov.yy / static_cast<double>(n) + kCovFloor;
  return cov;
}

GmmModel init_model(std::span<const Vec2> points, const Sym2& cov,
                    const std::array<Vec2, 2>& means) {
  GmmModel model;
  model.components[0] = GaussianComponent{means[0], cov, 0.5};
  model.components[1] = GaussianComponent{means[1], cov, 0.5};
  return model;
}

// kmeans++-style seeding: first mean uniform, second proportional to squared
// distance from the first.
std::array<Vec2, 2> seed_means(std::span<const Vec2> points, Rng& rng) {
  const Vec2 first = points[rng.index(points.size())];
  double total = 0.0;
  std::vector<double> d2(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double dx = points[i].x - first.x;
    const double dy = points[i].y - first.y;
    d2[i] = dx * dx + dy * dy;
    total += d2[i];
  }
  Vec2 second = points[0];
  if (total > 0.0) {
    double target = rng.unit() * total;
    for (std::size_t i = 0; i < points.size(); ++i) {
      target -= d2[i];
      if (target <= 0.0) {
        second = points[i];
        break;
      }
    }
  } else {
    second = points[rng.index(points.size())];
  }
  return {first, second};
}

GmmModel run_em(std::span<const Vec2> points, GmmModel model, const GmmOptions& options,
                std::size_t workers) {
  EmScratch scratch;
  scratch.resp0.resize(points.size());
  scratch.point_ll.resize(points.size());

  double ll = e_step(points, model, scratch, workers);
  model.ll_history.push_back(ll);
  model.converged = false;
  std::size_t iter = 0;
  while (iter < options.max_iter) {
    m_step(points, scratch, model);
    ++iter;
    const double next_ll = e_step(points, model, scratch, workers);
    model.ll_history.push_back(next_ll);
    const double improvement = next_ll - ll;
    ll = next_ll;
    if (improvement < options.tol) {
      model.converged = true;
      break;
    }
  }
  model.iterations = iter;
  model.log_likelihood = ll;
  return model;
}

}  // namespace

PlanePoints build_plane_points(const AttributedGraph& g) {
  const ParadoxFlags flags = compute_paradox_flags(g);
  PlanePoints plane;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (!flags.attr_valid[u]) continue;
    plane.points.push_back(Vec2{g.attribute(u), flags.mean_neighbor_attribute[u]});
    plane.node_of_row.push_back(u);
  }
  if (plane.points.empty()) {
    throw NumericError("build_plane_points: no node with an attribute and an attributed neighbor");
  }
  return plane;
}

GmmModel fit_gmm_em(std::span<const Vec2> points, const GmmOptions& options) {
  if (points.size() < 10) {
    throw NumericError("fit_gmm_em: need at least 10 points, have " +
                       std::to_string(points.size()));
  }
  for (const Vec2 p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw NumericError("fit_gmm_em: non-finite point");
    }
  }
  const std::size_t workers = resolve_workers(options.workers);
  const Sym2 cov = data_covariance(points);

  if (options.init_means) {
    return run_em(points, init_model(points, cov, *options.init_means), options, workers);
  }

  const std::size_t restarts = std::max<std::size_t>(1, options.restarts);
  GmmModel best;
  bool have_best = false;
  std::string last_error;
  for (std::size_t s = 0; s < restarts; ++s) {
    Rng rng(mix_seed(options.seed, s));
    try {
      GmmModel model =
          run_em(points, init_model(points, cov, seed_means(points, rng)), options, workers);
      if (!have_best || model.log_likelihood > best.log_likelihood) {
        best = std::move(model);
        have_best = true;
      }
    } catch (const NumericError& e) {
      last_error = e.what();  // collapsed restart; others may still succeed
    }
  }
  if (!have_best) {
    throw NumericError(last_error.empty() ? "degenerate component: all restarts collapsed"
                                          : last_error);
  }
  return best;
}

double mahalanobis(Vec2 point, const GaussianComponent& comp) {
  const double det = comp.cov.det();
  if (!(det > 0.0)) throw NumericError("mahalanobis: singular covariance");
  const double dx = point.x - comp.mean.x;
  const double dy = point.y - comp.mean.y;
  const double q =
      (comp.cov.yy * dx * dx - 2.0 * comp.cov.xy * dx * dy + comp.cov.xx * dy * dy) / det;
  return std::sqrt(std::max(q, 0.0));
}

const char* group_label_name(GroupLabel label) {
  switch (label) {
    case GroupLabel::kHappy: return "happy";
    case GroupLabel::kUnhappy: return "unhappy";
    case GroupLabel::kUnassigned: return "unassigned";
  }
  return "unknown";
}

std::vector<GroupLabel> demarcate(std::span<const Vec2> points, const GmmModel& model,
                                  double radius) {
  const std::size_t happy_idx =
      model.components[0].mean.x >= model.components[1].mean.x ? 0 : 1;
  const std::size_t unhappy_idx = 1 - happy_idx;
  const GaussianComponent& happy = model.components[happy_idx];
  const GaussianComponent& unhappy = model.components[unhappy_idx];
  const LogDensity d_happy(happy);
  const LogDensity d_unhappy(unhappy);

  std::vector<GroupLabel> labels(points.size(), GroupLabel::kUnassigned);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const bool in_happy = mahalanobis(points[i], happy) <= radius;
    const bool in_unhappy = mahalanobis(points[i], unhappy) <= radius;
    if (in_happy && in_unhappy) {
      // posterior responsibility tie-break
      const double a = std::log(happy.weight) + d_happy(points[i]);
      const double b = std::log(unhappy.weight) + d_unhappy(points[i]);
      labels[i] = a >= b ? GroupLabel::kHappy : GroupLabel::kUnhappy;
    } else if (in_happy) {
      labels[i] = GroupLabel::kHappy;
    } else if (in_unhappy) {
      labels[i] = GroupLabel::kUnhappy;
    }
  }
  return labels;
}

std::vector<GroupLabel> labels_by_node(const AttributedGraph& g, const PlanePoints& plane,
                                       std::span<const GroupLabel> row_labels) {
  if (plane.node_of_row.size() != row_labels.size()) {
    throw ConfigError("labels_by_node: row count mismatch");
  }
  std::vector<GroupLabel> labels(g.node_count(), GroupLabel::kUnassigned);
  for (std::size_t i = 0; i < row_labels.size(); ++i) {
    labels[plane.node_of_row[i]] = row_labels[i];
  }
  return labels;
}

std::string gmm_to_json(const GmmModel& model) {
  nlohmann::ordered_json doc;
  doc["components"] = nlohmann::ordered_json::array();
  for (const GaussianComponent& c : model.components) {
    nlohmann::ordered_json jc;
    jc["mean"] = {c.mean.x, c.mean.y};
    jc["covariance"] = {{c.cov.xx, c.cov.xy}, {c.cov.xy, c.cov.yy}};
    jc["weight"] = c.weight;
    doc["components"].push_back(jc);
  }
  doc["log_likelihood"] = model.log_likelihood;
  doc["iterations"] = model.iterations;
  doc["converged"] = model.converged;
  return doc.dump(2);
}

}  // namespace paradoxlab
