#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "paradoxlab/graph.hpp"
#include "paradoxlab/paradox.hpp"

namespace paradoxlab {

/// Node statistics recomputable over a resampled node multiset. Each node is
/// always evaluated against its full-graph neighborhood (precomputed flags),
/// not the induced subgraph of the draw.
enum class Statistic {
  kDegreeParadoxFraction,
  kAttributeParadoxFraction,
  kPearsonLogDegreeAttribute,
};

std::string statistic_name(Statistic s);

struct ResampleDistribution {
  std::vector<double> samples;  // length == replicates; NaN marks a missing replicate
  std::size_t replicates = 0;
  std::uint64_t master_seed = 0;
  std::string mode;

  std::size_t missing() const;
  std::vector<double> valid_samples() const;  // non-missing, original order
  double mean_valid() const;
};

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.95;
  std::string method = "percentile";
};

struct BootstrapOptions {
  double sample_frac = 0.1;
  std::size_t replicates = 5000;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  /// Restrict the subject pool (e.g. to one demarcated group); empty = all
  /// nodes. Each replicate draws ceil(sample_frac * pool) subjects from the
  /// pool uniformly with replacement.
  std::vector<NodeId> subjects;
};

/// Replicate r is seeded from mix_seed(seed, r) and written to samples[r],
/// so the distribution is bit-identical for any worker count. A replicate
/// whose statistic is undefined (e.g. a constant draw for the correlation)
/// is recorded as missing; more than 10% missing is an error.
ResampleDistribution bootstrap(const AttributedGraph& g, Statistic statistic,
                               const BootstrapOptions& options);

enum class NullMode {
  kPermute,   // uniform random permutation of the attribute values
  kResample,  // i.i.d. redraw with replacement from the empirical values
};

struct NullModelOptions {
  NullMode mode = NullMode::kPermute;
  std::size_t replicates = 20000;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

/// Attribute-paradox fraction under attribute reshuffling with the graph
/// structure held fixed. Values move only across nodes that have an
/// attribute, so the attribute multiset (permute) or its distribution
/// (resample) and every eligibility mask stay intact.
ResampleDistribution null_model(const AttributedGraph& g, const NullModelOptions& options);

/// Percentile interval from the order statistics of the non-missing samples;
/// default level 0.95 uses the (1-level)/2 and 1-(1-level)/2 percentiles.
/// Requires >= 100 non-missing samples and level in (0, 1).
ConfidenceInterval percentile_ci(const ResampleDistribution& dist, double level = 0.95);

/// Compatibility variant pinning explicit percentiles (e.g. 5 and 95).
ConfidenceInterval percentile_ci_at(const ResampleDistribution& dist, double lo_percent,
                                    double hi_percent);

/// One-column CSV ("value" header, literal nan for missing replicates).
void export_distribution_csv(const ResampleDistribution& dist,
                             const std::filesystem::path& path);

}  // namespace paradoxlab
