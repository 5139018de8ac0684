#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bmlrp/ascent.hpp"
#include "bmlrp/router.hpp"

namespace bmlrp {

struct ExperimentConfig {
  GenConfig gen;
  std::vector<double> fractions = {0.0, 0.01, 0.05, 0.10};
  std::vector<uint64_t> stretch_sizes = {256, 512, 1024, 2048, 4096};
  int repetitions = 10;
  size_t stretch_samples = 1000;
  size_t delivery_samples = 10000;
  int extra_k = 0;
  ConnectTarget connect_target = ConnectTarget::kPathEnd;
  uint16_t max_depth = 0;
  bool parallel = true;

  std::string to_json() const;  // canonical, key-sorted
  uint64_t config_hash() const; // FNV-1a over to_json()
};

struct DegreeRow {
  double fraction = 0;
  int level = 0;
  double avg_degree = 0;   // mean over seeds of per-level mean member degree
  double members = 0;      // mean over seeds of mean network size at the level
  double median_degree = 0;
};

struct DegreeResult {
  ExperimentConfig config;
  std::vector<DegreeRow> rows;
  std::vector<std::string> warnings;
  int seeds_used = 0;
};

// Builds the full structure for every fraction and seed and aggregates the
// average node degree per level.
DegreeResult degree_experiment(const ExperimentConfig& cfg);

struct StretchRow {
  uint64_t pair_id = 0;
  NodeId src, dst;
  size_t hops = 0;
  int bfs = 0;
  double stretch = 1;
};

struct StretchSizeSummary {
  uint64_t nodes = 0;
  uint64_t seed = 0;
  double mean_hops = 0;
  double mean_stretch = 0;
  double median_stretch = 0;
  double p95_stretch = 0;
};

struct StretchResult {
  ExperimentConfig config;
  std::vector<StretchRow> rows;
  std::vector<StretchSizeSummary> summaries;  // one per (size, seed)
  double hops_vs_n_slope = 0;                 // log mean_hops vs log N least squares
};

StretchResult stretch_experiment(const ExperimentConfig& cfg);

struct DeliveryReport {
  uint64_t pairs_tested = 0;
  uint64_t failures = 0;
  uint64_t loop_violations = 0;
};

// Full pair enumeration up to 256 members, sampled beyond. fault_fraction
// drops that share of records from every table first, to exercise the
// failure accounting.
DeliveryReport delivery_check(const MultiLevelNetwork& net, size_t sample_limit, uint64_t seed,
                              double fault_fraction = 0.0);

// Per-level build summary used by the CLI and the experiments.
struct LevelSummary {
  std::string prefix;
  int depth = 0;
  size_t members = 0;
  size_t links = 0;
  double avg_degree = 0;
  int rounds = 0;
};
std::vector<LevelSummary> summarize(const MultiLevelNetwork& net);

void write_degrees_csv(const DegreeResult& r, std::ostream& out);
void write_stretch_csv(const StretchResult& r, std::ostream& out);
std::string degrees_summary_json(const DegreeResult& r);
std::string stretch_summary_json(const StretchResult& r);

}  // namespace bmlrp
