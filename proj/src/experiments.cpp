#include "bmlrp/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "bmlrp/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bmlrp {

namespace {

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

uint64_t derived_seed(uint64_t base, uint64_t purpose, uint64_t k) {
  return Rng(base).substream(purpose).substream(k).next();
}

std::string fmt(double v, const char* spec = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const size_t m = v.size();
  return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

BuildOptions build_options(const ExperimentConfig& cfg) {
  BuildOptions opts;
  opts.connect_target = cfg.connect_target;
  opts.extra_k = cfg.extra_k;
  opts.max_depth = cfg.max_depth;
  opts.engine.parallel = cfg.parallel;
  return opts;
}

}  // namespace

std::string ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["node_count"] = gen.node_count;
  j["width_bits"] = gen.width_bits;
  j["area_side"] = gen.area_side;
  j["radius"] = gen.radius;
  j["radius_effective"] = gen.radius > 0 ? gen.radius : default_radius(gen.node_count, gen.area_side);
  j["radius_note"] = gen.radius > 0 ? "explicit" : "calibrated default (target degree 10)";
  j["random_link_fraction"] = gen.random_link_fraction;
  j["seed"] = gen.seed;
  j["fractions"] = fractions;
  j["stretch_sizes"] = stretch_sizes;
  j["repetitions"] = repetitions;
  j["stretch_samples"] = stretch_samples;
  j["delivery_samples"] = delivery_samples;
  j["extra_k"] = extra_k;
  j["connect_target"] = connect_target == ConnectTarget::kPathEnd ? "d" : "e2";
  j["max_depth"] = max_depth;
  return j.dump();
}

uint64_t ExperimentConfig::config_hash() const { return fnv1a(to_json()); }

DegreeResult degree_experiment(const ExperimentConfig& cfg) {
  DegreeResult res;
  res.config = cfg;

  for (double fraction : cfg.fractions) {
    // per depth: per-seed (avg degree, mean members)
    std::map<int, std::vector<std::pair<double, double>>> per_depth;
    int used = 0, failed = 0;
    for (int k = 0; k < cfg.repetitions; ++k) {
      GenConfig gen = cfg.gen;
      gen.random_link_fraction = fraction;
      gen.seed = derived_seed(cfg.gen.seed, rng_tag::kSeedSweep, static_cast<uint64_t>(k));
      MultiLevelNetwork net;
      try {
        net = build_multilevel(generate_network(gen), build_options(cfg));
      } catch (const std::exception& e) {
        ++failed;
        res.warnings.push_back("fraction " + fmt(fraction, "%g") + " seed " + std::to_string(k) +
                               " failed: " + e.what());
        continue;
      }
      ++used;
      // level depth -> (sum of degrees, total members, network count, member sum)
      std::map<int, std::array<double, 3>> acc;
      for (const auto& [ref, ln] : net.levels) {
        if (ln.members.empty()) continue;
        auto& a = acc[ref.depth];
        a[0] += 2.0 * static_cast<double>(ln.links.size());
        a[1] += static_cast<double>(ln.members.size());
        a[2] += 1.0;
      }
      for (const auto& [depth, a] : acc) {
        per_depth[depth].push_back({a[0] / a[1], a[1] / a[2]});
      }
    }
    if (cfg.repetitions > 0 && failed > 0 &&
        static_cast<double>(failed) / cfg.repetitions >= 0.05) {
      throw std::runtime_error("degree experiment: " + std::to_string(failed) + "/" +
                               std::to_string(cfg.repetitions) + " builds failed at fraction " +
                               fmt(fraction, "%g"));
    }
    res.seeds_used = used;
    for (const auto& [depth, vals] : per_depth) {
      DegreeRow row;
      row.fraction = fraction;
      row.level = depth;
      std::vector<double> degs;
      double dsum = 0, msum = 0;
      for (const auto& [deg, mem] : vals) {
        degs.push_back(deg);
        dsum += deg;
        msum += mem;
      }
      row.avg_degree = dsum / static_cast<double>(vals.size());
      row.members = msum / static_cast<double>(vals.size());
      row.median_degree = median_of(degs);
      res.rows.push_back(row);
    }
  }
  std::sort(res.rows.begin(), res.rows.end(), [](const DegreeRow& a, const DegreeRow& b) {
    return std::pair{a.fraction, a.level} < std::pair{b.fraction, b.level};
  });
  return res;
}

StretchResult stretch_experiment(const ExperimentConfig& cfg) {
  StretchResult res;
  res.config = cfg;
  uint64_t pair_id = 0;
  std::vector<std::pair<double, double>> fit_points;  // (log N, log mean_hops)
  for (uint64_t n : cfg.stretch_sizes) {
    for (int k = 0; k < cfg.repetitions; ++k) {
      GenConfig gen = cfg.gen;
      gen.node_count = n;
      gen.seed = derived_seed(cfg.gen.seed, rng_tag::kSeedSweep,
                              (n << 8) ^ static_cast<uint64_t>(k));
      const MultiLevelNetwork net = build_multilevel(generate_network(gen), build_options(cfg));
      const StretchStats st = measure_stretch(net, cfg.stretch_samples, gen.seed, cfg.parallel);
      for (const StretchSample& s : st.samples) {
        res.rows.push_back({pair_id++, s.src, s.dst, s.hops, s.bfs, s.stretch});
      }
      StretchSizeSummary sum;
      sum.nodes = n;
      sum.seed = gen.seed;
      sum.mean_hops = st.mean_hops;
      sum.mean_stretch = st.mean_stretch;
      sum.median_stretch = st.median_stretch;
      sum.p95_stretch = st.p95_stretch;
      res.summaries.push_back(sum);
      if (st.mean_hops > 0) {
        fit_points.emplace_back(std::log(static_cast<double>(n)), std::log(st.mean_hops));
      }
    }
  }
  if (fit_points.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : fit_points) {
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double m = static_cast<double>(fit_points.size());
    res.hops_vs_n_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  return res;
}

DeliveryReport delivery_check(const MultiLevelNetwork& net, size_t sample_limit, uint64_t seed,
                              double fault_fraction) {
  const MultiLevelNetwork* use = &net;
  MultiLevelNetwork faulty;
  if (fault_fraction > 0) {
    faulty = net;
    Rng rng = Rng(seed).substream(rng_tag::kFault);
    for (auto& [ref, ln] : faulty.levels) {
      for (auto& [owner, table] : ln.tables) {
        std::vector<std::pair<NodeId, EdgeRecord>> drop;
        for (const auto& [from, bucket] : table.records_by_sender()) {
          for (const EdgeRecord& r : bucket) {
            if (rng.next_double() < fault_fraction) drop.emplace_back(from, r);
          }
        }
        for (const auto& [from, rec] : drop) {
          TableUpdate up;
          up.from = from;
          up.remove.push_back(rec);
          table.apply_update(up);
        }
      }
    }
    use = &faulty;
  }

  auto ids = use->physical.node_ids();
  std::sort(ids.begin(), ids.end());
  const size_t n = ids.size();
  DeliveryReport rep;
  if (n < 2) return rep;

  std::vector<std::pair<int32_t, int32_t>> pairs;
  if (n <= 256) {
    for (int32_t i = 0; i < static_cast<int32_t>(n); ++i) {
      for (int32_t j = 0; j < static_cast<int32_t>(n); ++j) {
        if (i != j) pairs.emplace_back(i, j);
      }
    }
  } else {
    Rng rng = Rng(seed).substream(rng_tag::kStretchPairs);
    for (size_t k = 0; k < sample_limit; ++k) {
      const auto i = static_cast<int32_t>(rng.next_below(n));
      auto j = static_cast<int32_t>(rng.next_below(n - 1));
      if (j >= i) ++j;
      pairs.emplace_back(i, j);
    }
  }

  rep.pairs_tested = pairs.size();
  uint64_t failures = 0, loops = 0;
  const int32_t np = static_cast<int32_t>(pairs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 32) reduction(+ : failures, loops)
#endif
  for (int32_t k = 0; k < np; ++k) {
    try {
      route(*use, ids[pairs[k].first], ids[pairs[k].second]);
    } catch (const LoopViolation&) {
      ++loops;
    } catch (const std::exception&) {
      ++failures;
    }
  }
  rep.failures = failures;
  rep.loop_violations = loops;
  return rep;
}

std::vector<LevelSummary> summarize(const MultiLevelNetwork& net) {
  std::vector<LevelSummary> out;
  for (const auto& [ref, ln] : net.levels) {
    LevelSummary s;
    s.prefix = ref.to_string();
    s.depth = ref.depth;
    s.members = ln.members.size();
    s.links = ln.links.size();
    s.avg_degree = ln.average_degree();
    s.rounds = ln.rounds;
    out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](const LevelSummary& a, const LevelSummary& b) {
    return std::pair{a.depth, a.prefix} < std::pair{b.depth, b.prefix};
  });
  return out;
}

namespace {

void write_header(const ExperimentConfig& cfg, const char* kind, std::ostream& out) {
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(cfg.config_hash()));
  out << "# bmlrp " << kind << " v1\n# config " << cfg.to_json() << "\n# config_hash " << hash
      << "\n# seed " << cfg.gen.seed << '\n';
}

}  // namespace

void write_degrees_csv(const DegreeResult& r, std::ostream& out) {
  write_header(r.config, "degrees", out);
  out << "fraction,level,avg_degree,members\n";
  for (const DegreeRow& row : r.rows) {
    out << fmt(row.fraction, "%g") << ',' << row.level << ',' << fmt(row.avg_degree) << ','
        << fmt(row.members, "%.3f") << '\n';
  }
}

void write_stretch_csv(const StretchResult& r, std::ostream& out) {
  write_header(r.config, "stretch", out);
  out << "pair_id,src,dst,hops,bfs,stretch\n";
  for (const StretchRow& row : r.rows) {
    out << row.pair_id << ',' << row.src.to_binary() << ',' << row.dst.to_binary() << ','
        << row.hops << ',' << row.bfs << ',' << fmt(row.stretch) << '\n';
  }
}

std::string degrees_summary_json(const DegreeResult& r) {
  nlohmann::json j;
  j["config"] = nlohmann::json::parse(r.config.to_json());
  j["config_hash"] = r.config.config_hash();
  j["seeds_used"] = r.seeds_used;
  j["warnings"] = r.warnings;
  auto rows = nlohmann::json::array();
  for (const DegreeRow& row : r.rows) {
    rows.push_back({{"fraction", row.fraction},
                    {"level", row.level},
                    {"avg_degree", row.avg_degree},
                    {"median_degree", row.median_degree},
                    {"members", row.members}});
  }
  j["rows"] = rows;
  return j.dump(2);
}

std::string stretch_summary_json(const StretchResult& r) {
  nlohmann::json j;
  j["config"] = nlohmann::json::parse(r.config.to_json());
  j["config_hash"] = r.config.config_hash();
  j["hops_vs_n_slope"] = r.hops_vs_n_slope;
  auto rows = nlohmann::json::array();
  for (const StretchSizeSummary& s : r.summaries) {
    rows.push_back({{"nodes", s.nodes},
                    {"seed", s.seed},
                    {"mean_hops", s.mean_hops},
                    {"mean_stretch", s.mean_stretch},
                    {"median_stretch", s.median_stretch},
                    {"p95_stretch", s.p95_stretch}});
  }
  j["sizes"] = rows;
  return j.dump(2);
}

}  // namespace bmlrp
