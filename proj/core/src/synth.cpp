#include "paradoxlab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include "paradoxlab/errors.hpp"
#include "paradoxlab/ingest.hpp"
#include "paradoxlab/rng.hpp"
#include "paradoxlab/stats.hpp"

namespace paradoxlab {

namespace {

AttributedGraph gen_preferential_attachment(std::size_t n, std::size_t m, Rng& rng) {
  if (m < 1) throw ConfigError("preferential attachment: m must be >= 1");
  if (n < m + 1) throw ConfigError("preferential attachment: need n > m");

  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(m * (n - m));
  // every edge endpoint appears once; drawing uniformly from this list is
  // degree-proportional sampling
  std::vector<NodeId> endpoints;
  endpoints.reserve(2 * m * (n - m));

  std::vector<NodeId> targets;
  std::unordered_set<NodeId> seen;
  for (std::size_t t = m; t < n; ++t) {
    targets.clear();
    seen.clear();
    if (t == m) {
      // all degrees zero: the first arrival links to every seed
      for (std::size_t s = 0; s < m; ++s) targets.push_back(static_cast<NodeId>(s));
    } else {
      while (targets.size() < m) {
        const NodeId candidate = endpoints[rng.index(endpoints.size())];
        if (seen.insert(candidate).second) targets.push_back(candidate);
      }
    }
    for (const NodeId v : targets) {
      edges.emplace_back(static_cast<NodeId>(t), v);
      endpoints.push_back(static_cast<NodeId>(t));
      endpoints.push_back(v);
    }
  }
  return AttributedGraph::from_undirected_edges(n, edges);
}

AttributedGraph gen_configuration(std::size_t n, double gamma, std::size_t min_degree, Rng& rng) {
  if (min_degree < 1) throw ConfigError("configuration model: min_degree must be >= 1");
  if (n < min_degree + 1) throw ConfigError("configuration model: n too small for min_degree");
  if (!(gamma > 1.0)) throw ConfigError("configuration model: gamma must be > 1");

  const std::size_t k_max = n - 1;
  std::vector<double> cdf(k_max - min_degree + 1);
  double total = 0.0;
  for (std::size_t k = min_degree; k <= k_max; ++k) {
    total += std::pow(static_cast<double>(k), -gamma);
    cdf[k - min_degree] = total;
  }
  auto sample_degree = [&]() {
    const double u = rng.unit() * total;
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    return min_degree + static_cast<std::size_t>(it - cdf.begin());
  };

  std::vector<std::size_t> degrees(n);
  std::size_t degree_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    degrees[i] = sample_degree();
    degree_sum += degrees[i];
  }
  while (degree_sum % 2 == 1) {  // infeasible odd sum: resample the last entry
    degree_sum -= degrees[n - 1];
    degrees[n - 1] = sample_degree();
    degree_sum += degrees[n - 1];
  }

  std::vector<NodeId> stubs;
  stubs.reserve(degree_sum);
  for (std::size_t i = 0; i < n; ++i) {
    stubs.insert(stubs.end(), degrees[i], static_cast<NodeId>(i));
  }
  rng.shuffle(stubs.begin(), stubs.end());

  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(stubs.size() / 2);
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    if (stubs[i] == stubs[i + 1]) continue;  // self-loop discarded
    edges.emplace_back(stubs[i], stubs[i + 1]);
  }
  // from_undirected_edges deduplicates multi-edges
  return AttributedGraph::from_undirected_edges(n, edges);
}

double clamp_attr(double v) { return std::clamp(v, -1.0, 1.0); }

std::vector<double> draw_base_attributes(std::size_t n, const SynthSpec& spec, Rng& rng) {
  std::vector<double> attrs(n);
  if (const auto* bimodal = std::get_if<BimodalAttributes>(&spec.attr_model)) {
    if (!(bimodal->mix >= 0.0 && bimodal->mix <= 1.0)) {
      throw ConfigError("attribute model: mix must be in [0, 1]");
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double mu = rng.unit() < bimodal->mix ? bimodal->mu1 : bimodal->mu2;
      attrs[i] = clamp_attr(rng.normal(mu, bimodal->sigma));
    }
  } else {
    const auto& mono = std::get<MonoAttributes>(spec.attr_model);
    for (std::size_t i = 0; i < n; ++i) {
      attrs[i] = clamp_attr(rng.normal(mono.mu, mono.sigma));
    }
  }
  return attrs;
}

// Reorders `sorted_values` onto nodes via the rank of a Gaussian-copula
// latent z = rho * standardized ln(degree) + sqrt(1-rho^2) * noise. The value
// multiset is untouched; rho = +-1 gives the comonotone extremes.
std::vector<double> couple_to_degree(std::span<const double> sorted_values,
                                     std::span<const double> std_log_deg,
                                     std::span<const double> noise, double rho) {
  const std::size_t n = sorted_values.size();
  std::vector<double> latent(n);
  const double mix = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  for (std::size_t i = 0; i < n; ++i) latent[i] = rho * std_log_deg[i] + mix * noise[i];

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return latent[a] < latent[b]; });

  std::vector<double> out(n);
  for (std::size_t rank = 0; rank < n; ++rank) out[order[rank]] = sorted_values[rank];
  return out;
}

double pearson_vs_logdeg(std::span<const double> attrs, std::span<const double> log_deg) {
  const auto r = pearson(attrs, log_deg);
  return r.value_or(0.0);
}

// Greedy homophily: propose attribute swaps between equal-degree nodes and
// accept when the summed squared attribute gap over incident edges shrinks.
// Equal-degree swaps leave the (attribute, degree) joint distribution -- and
// therefore the calibrated correlation -- exactly unchanged.
void homophily_passes(const AttributedGraph& g, std::vector<double>& attrs, std::size_t rounds,
                      Rng& rng) {
  const std::size_t n = g.node_count();
  if (n < 2 || rounds == 0) return;

  std::vector<std::vector<NodeId>> degree_buckets;
  for (NodeId u = 0; u < n; ++u) {
    const std::size_t d = g.degree(u);
    if (degree_buckets.size() <= d) degree_buckets.resize(d + 1);
    degree_buckets[d].push_back(u);
  }

  auto local_cost = [&](NodeId u, double a_u, NodeId skip) {
    double cost = 0.0;
    for (const NodeId v : g.neighbors(u)) {
      if (v == skip) continue;
      const double d = a_u - attrs[v];
      cost += d * d;
    }
    return cost;
  };

  for (std::size_t round = 0; round < rounds; ++round) {
    for (std::size_t step = 0; step < n; ++step) {
      const NodeId u = static_cast<NodeId>(rng.index(n));
      const auto& bucket = degree_buckets[g.degree(u)];
      if (bucket.size() < 2) continue;
      const NodeId v = bucket[rng.index(bucket.size())];
      if (u == v || attrs[u] == attrs[v]) continue;
      const double before = local_cost(u, attrs[u], v) + local_cost(v, attrs[v], u);
      const double after = local_cost(u, attrs[v], v) + local_cost(v, attrs[u], u);
      if (after < before) std::swap(attrs[u], attrs[v]);
    }
  }
}

}  // namespace

AttributedGraph gen_graph(const SynthSpec& spec) {
  if (spec.n < 2) throw ConfigError("synth: n must be >= 2");
  Rng rng(mix_seed(spec.seed, 0x67656E));  // "gen" stream
  if (const auto* pa = std::get_if<PreferentialAttachment>(&spec.degree_model)) {
    const std::size_t m = std::min(pa->m, spec.n - 1);
    return gen_preferential_attachment(spec.n, m, rng);
  }
  const auto& cfg = std::get<ConfigurationModel>(spec.degree_model);
  return gen_configuration(spec.n, cfg.gamma, cfg.min_degree, rng);
}

AttributedGraph assign_attributes(const AttributedGraph& g, const SynthSpec& spec) {
  const std::size_t n = g.node_count();
  if (n == 0) throw ConfigError("assign_attributes: empty graph");
  if (!(spec.degree_corr >= -1.0 && spec.degree_corr <= 1.0)) {
    throw ConfigError("assign_attributes: degree_corr must be in [-1, 1]");
  }
  Rng rng(mix_seed(spec.seed, 0x61747472));  // "attr" stream

  std::vector<double> base = draw_base_attributes(n, spec, rng);
  std::vector<double> sorted_values = base;
  std::sort(sorted_values.begin(), sorted_values.end());

  std::vector<double> log_deg(n);
  for (NodeId u = 0; u < n; ++u) {
    log_deg[u] = std::log(static_cast<double>(std::max<std::size_t>(1, g.degree(u))));
  }
  const double mean_ld = mean(log_deg);
  double var_ld = 0.0;
  for (const double v : log_deg) var_ld += (v - mean_ld) * (v - mean_ld);
  var_ld /= static_cast<double>(n);
  std::vector<double> std_log_deg(n);
  const double sd_ld = std::sqrt(var_ld);
  for (std::size_t i = 0; i < n; ++i) {
    std_log_deg[i] = sd_ld > 0.0 ? (log_deg[i] - mean_ld) / sd_ld : 0.0;
  }
  std::vector<double> noise(n);
  for (auto& z : noise) z = rng.normal();

  // Calibrate the copula strength by bisection; the noise vector is fixed so
  // the measured correlation is a deterministic, increasing function of rho.
  const double target = spec.degree_corr;
  constexpr double kTol = 0.005;  // headroom inside the contractual +-0.02
  auto measure = [&](double rho) {
    const auto candidate = couple_to_degree(sorted_values, std_log_deg, noise, rho);
    return pearson_vs_logdeg(candidate, log_deg);
  };

  double rho_lo = -1.0, rho_hi = 1.0;
  double f_lo = measure(rho_lo), f_hi = measure(rho_hi);
  const double extreme = target >= 0.0 ? f_hi : f_lo;
  if (target > f_hi + 0.02 || target < f_lo - 0.02) {
    throw UnreachableCorrelationError(
        "assign_attributes: degree_corr " + std::to_string(target) +
            " unreachable on this topology; best achievable is " + std::to_string(extreme),
        extreme);
  }

  double rho = std::clamp(target, rho_lo, rho_hi);
  double achieved = measure(rho);
  for (int iter = 0; iter < 60 && std::fabs(achieved - target) > kTol; ++iter) {
    if (achieved < target) {
      rho_lo = rho;
      f_lo = achieved;
    } else {
      rho_hi = rho;
      f_hi = achieved;
    }
    rho = 0.5 * (rho_lo + rho_hi);
    achieved = measure(rho);
  }
  if (std::fabs(achieved - target) > 0.02) {
    throw UnreachableCorrelationError(
        "assign_attributes: calibration stalled at Pearson " + std::to_string(achieved) +
            " for target " + std::to_string(target),
        achieved);
  }

  std::vector<double> attrs = couple_to_degree(sorted_values, std_log_deg, noise, rho);
  homophily_passes(g, attrs, spec.homophily_rounds, rng);

  const std::vector<std::uint8_t> present(n, 1);
  return replace_attributes(g, attrs, present);
}

AttributedGraph gen_attributed_graph(const SynthSpec& spec) {
  return assign_attributes(gen_graph(spec), spec);
}

SynthSpec paperlike_spec(std::uint64_t seed) {
  SynthSpec spec;
  spec.n = 39110;
  spec.degree_model = PreferentialAttachment{15};
  spec.attr_model = BimodalAttributes{0.204, 0.007, 0.05, 0.5};
  spec.degree_corr = 0.11;
  spec.homophily_rounds = 30;
  spec.seed = seed;
  return spec;
}

AttributedGraph paperlike_fixture(std::uint64_t seed) {
  return gen_attributed_graph(paperlike_spec(seed));
}

}  // namespace paradoxlab
