#include "paradoxlab/resample.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "paradoxlab/errors.hpp"
#include "paradoxlab/parallel.hpp"
#include "paradoxlab/rng.hpp"
#include "paradoxlab/stats.hpp"

namespace paradoxlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_missing_budget(const ResampleDistribution& dist) {
  const std::size_t missing = dist.missing();
  if (missing * 10 > dist.replicates) {
    throw NumericError("resampling: " + std::to_string(missing) + " of " +
                       std::to_string(dist.replicates) + " replicates undefined (> 10%)");
  }
}

}  // namespace

std::string statistic_name(Statistic s) {
  switch (s) {
    case Statistic::kDegreeParadoxFraction: return "degree-paradox";
    case Statistic::kAttributeParadoxFraction: return "attribute-paradox";
    case Statistic::kPearsonLogDegreeAttribute: return "pearson";
  }
  return "unknown";
}

std::size_t ResampleDistribution::missing() const {
  return static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(), [](double v) { return std::isnan(v); }));
}

std::vector<double> ResampleDistribution::valid_samples() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const double v : samples) {
    if (!std::isnan(v)) out.push_back(v);
  }
  return out;
}

double ResampleDistribution::mean_valid() const {
  const auto valid = valid_samples();
  return mean(valid);
}

ResampleDistribution bootstrap(const AttributedGraph& g, Statistic statistic,
                               const BootstrapOptions& options) {
  if (!(options.sample_frac > 0.0 && options.sample_frac <= 1.0)) {
    throw ConfigError("bootstrap: sample_frac must be in (0, 1]");
  }
  if (options.replicates == 0) throw ConfigError("bootstrap: replicates must be positive");

  // subject pool
  std::vector<NodeId> pool = options.subjects;
  if (pool.empty()) {
    pool.resize(g.node_count());
    std::iota(pool.begin(), pool.end(), NodeId{0});
  }
  if (pool.empty()) throw NumericError("bootstrap: empty graph");

  const ParadoxFlags flags = compute_paradox_flags(g);

  // per-node values for the correlation statistic
  std::vector<double> attr(g.node_count(), 0.0), log_deg(g.node_count(), 0.0);
  std::vector<std::uint8_t> corr_valid(g.node_count(), 0);
  if (statistic == Statistic::kPearsonLogDegreeAttribute) {
    for (NodeId u = 0; u < g.node_count(); ++u) {
      if (g.has_attribute(u) && g.degree(u) > 0) {
        corr_valid[u] = 1;
        attr[u] = g.attribute(u);
        log_deg[u] = std::log(static_cast<double>(g.degree(u)));
      }
    }
  }

  const auto draw_count = static_cast<std::size_t>(
      std::ceil(options.sample_frac * static_cast<double>(pool.size())));

  ResampleDistribution dist;
  dist.replicates = options.replicates;
  dist.master_seed = options.seed;
  dist.mode = "bootstrap:" + statistic_name(statistic);
  dist.samples.assign(options.replicates, kNaN);

  const std::size_t workers = resolve_workers(options.workers);
  parallel_chunks(options.replicates, workers, [&](std::size_t begin, std::size_t end) {
    std::vector<double> xs, ys;
    for (std::size_t r = begin; r < end; ++r) {
      Rng rng(mix_seed(options.seed, r));
      switch (statistic) {
        case Statistic::kDegreeParadoxFraction:
        case Statistic::kAttributeParadoxFraction: {
          const auto& valid = statistic == Statistic::kDegreeParadoxFraction
                                  ? flags.degree_valid
                                  : flags.attr_valid;
          const auto& flag = statistic == Statistic::kDegreeParadoxFraction ? flags.degree_flag
                                                                            : flags.attr_flag;
          std::size_t eligible = 0, hits = 0;
          for (std::size_t i = 0; i < draw_count; ++i) {
            const NodeId u = pool[rng.index(pool.size())];
            if (!valid[u]) continue;
            ++eligible;
            hits += flag[u];
          }
          if (eligible > 0) {
            dist.samples[r] =
                static_cast<double>(hits) / static_cast<double>(eligible);
          }
          break;
        }
        case Statistic::kPearsonLogDegreeAttribute: {
          xs.clear();
          ys.clear();
          for (std::size_t i = 0; i < draw_count; ++i) {
            const NodeId u = pool[rng.index(pool.size())];
            if (!corr_valid[u]) continue;
            xs.push_back(attr[u]);
            ys.push_back(log_deg[u]);
          }
          if (xs.size() >= 3) {
            if (const auto r_val = pearson(xs, ys)) dist.samples[r] = *r_val;
          }
          break;
        }
      }
    }
  });

  check_missing_budget(dist);
  return dist;
}

ResampleDistribution null_model(const AttributedGraph& g, const NullModelOptions& options) {
  if (options.replicates == 0) throw ConfigError("null_model: replicates must be positive");
  if (g.attributed_count() == 0) throw NumericError("null_model: graph has no attributes");

  const std::size_t n = g.node_count();

  // Positions that carry a value; the presence pattern is held fixed, so node
  // eligibility (own attribute + attributed neighbor) is identical across
  // replicates.
  std::vector<NodeId> attributed;
  std::vector<double> values;  // empirical multiset, in node order
  attributed.reserve(g.attributed_count());
  for (NodeId u = 0; u < n; ++u) {
    if (g.has_attribute(u)) {
      attributed.push_back(u);
      values.push_back(g.attribute(u));
    }
  }

  std::vector<NodeId> eligible;
  for (NodeId u = 0; u < n; ++u) {
    if (!g.has_attribute(u)) continue;
    std::size_t cnt = 0;
    for (const NodeId v : g.neighbors(u)) cnt += g.has_attribute(v);
    if (cnt > 0) eligible.push_back(u);
  }
  if (eligible.empty()) {
    throw NumericError("null_model: no node with an attribute and an attributed neighbor");
  }

  ResampleDistribution dist;
  dist.replicates = options.replicates;
  dist.master_seed = options.seed;
  dist.mode = options.mode == NullMode::kPermute ? "null:permute" : "null:resample";
  dist.samples.assign(options.replicates, kNaN);

  const std::size_t workers = resolve_workers(options.workers);
  parallel_chunks(options.replicates, workers, [&](std::size_t begin, std::size_t end) {
    std::vector<double> shuffled(values.size());
    std::vector<double> node_attr(n, 0.0);
    for (std::size_t r = begin; r < end; ++r) {
      Rng rng(mix_seed(options.seed, r));
      if (options.mode == NullMode::kPermute) {
        shuffled = values;
        rng.shuffle(shuffled.begin(), shuffled.end());
      } else {
        for (std::size_t i = 0; i < values.size(); ++i) {
          shuffled[i] = values[rng.index(values.size())];
        }
      }
      for (std::size_t i = 0; i < attributed.size(); ++i) node_attr[attributed[i]] = shuffled[i];

      std::size_t hits = 0;
      for (const NodeId u : eligible) {
        const double a_u = node_attr[u];
        double diff = 0.0;
        for (const NodeId v : g.neighbors(u)) {
          if (g.has_attribute(v)) diff += node_attr[v] - a_u;
        }
        hits += diff > 0.0;
      }
      dist.samples[r] = static_cast<double>(hits) / static_cast<double>(eligible.size());
    }
  });

  check_missing_budget(dist);
  return dist;
}

ConfidenceInterval percentile_ci(const ResampleDistribution& dist, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw ConfigError("percentile_ci: level must be in (0, 1)");
  }
  const double alpha = 0.5 * (1.0 - level);
  ConfidenceInterval ci = percentile_ci_at(dist, 100.0 * alpha, 100.0 * (1.0 - alpha));
  ci.level = level;
  return ci;
}

ConfidenceInterval percentile_ci_at(const ResampleDistribution& dist, double lo_percent,
                                    double hi_percent) {
  if (!(lo_percent >= 0.0 && hi_percent <= 100.0 && lo_percent < hi_percent)) {
    throw ConfigError("percentile_ci: invalid percentile pair");
  }
  std::vector<double> valid = dist.valid_samples();
  if (valid.size() < 100) {
    throw NumericError("percentile_ci: need at least 100 non-missing samples, have " +
                       std::to_string(valid.size()));
  }
  std::sort(valid.begin(), valid.end());
  ConfidenceInterval ci;
  ci.lo = percentile_sorted(valid, lo_percent / 100.0);
  ci.hi = percentile_sorted(valid, hi_percent / 100.0);
  ci.level = (hi_percent - lo_percent) / 100.0;
  return ci;
}

void export_distribution_csv(const ResampleDistribution& dist,
                             const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open distribution CSV for writing: " + path.string());
  out << "value\n";
  char buf[64];
  for (const double v : dist.samples) {
    if (std::isnan(v)) {
      out << "nan\n";
    } else {
      const auto res = std::to_chars(buf, buf + sizeof buf, v);
      out.write(buf, res.ptr - buf);
      out.put('\n');
    }
  }
  if (!out) throw IoError("short write on distribution CSV: " + path.string());
}

}  // namespace paradoxlab
