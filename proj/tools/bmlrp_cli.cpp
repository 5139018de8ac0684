#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bmlrp/experiments.hpp"
#include "bmlrp/oracle.hpp"

namespace {

using namespace bmlrp;

struct CommonArgs {
  ExperimentConfig cfg;
  std::string net_file;
  std::string out_dir = ".";
  bool no_restrict = false;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--seed", a.cfg.gen.seed, "master seed");
  cmd->add_option("--nodes", a.cfg.gen.node_count, "node count");
  cmd->add_option("--bits", a.cfg.gen.width_bits, "address width in bits");
  cmd->add_option("--radius", a.cfg.gen.radius, "connectivity radius (0 = auto)");
  cmd->add_option("--area", a.cfg.gen.area_side, "square area side length");
  cmd->add_option("--random-links", a.cfg.gen.random_link_fraction,
                  "fraction of nodes given a random long-range link");
  cmd->add_option("--extra-k", a.cfg.extra_k, "extra nearest same-color neighbors per node");
  cmd->add_option("--connect-target", [&a](const std::vector<std::string>& v) {
        if (v[0] == "d") {
          a.cfg.connect_target = ConnectTarget::kPathEnd;
        } else if (v[0] == "e2") {
          a.cfg.connect_target = ConnectTarget::kXorPartner;
        } else {
          return false;
        }
        return true;
      },
      "long-range connect target: d | e2");
  cmd->add_option("--max-depth", a.cfg.max_depth, "stop building above this level (0 = all)");
  cmd->add_option("--out", a.out_dir, "output directory");
  cmd->add_flag("--serial", [&a](int64_t) { a.cfg.parallel = false; },
                "disable OpenMP parallel kernels");
}

PhysicalNetwork obtain_network(const CommonArgs& a) {
  if (!a.net_file.empty()) {
    PhysicalNetwork net = load_network(a.net_file);
    return a.no_restrict ? net : restrict_largest_component(net);
  }
  return generate_network(a.cfg.gen, !a.no_restrict);
}

BuildOptions options_of(const CommonArgs& a) {
  BuildOptions opts;
  opts.connect_target = a.cfg.connect_target;
  opts.extra_k = a.cfg.extra_k;
  opts.max_depth = a.cfg.max_depth;
  opts.engine.parallel = a.cfg.parallel;
  return opts;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << body;
}

std::string build_summary_json(const MultiLevelNetwork& net) {
  nlohmann::json j;
  auto levels = nlohmann::json::array();
  for (const LevelSummary& s : summarize(net)) {
    levels.push_back({{"prefix", s.prefix},
                      {"depth", s.depth},
                      {"members", s.members},
                      {"links", s.links},
                      {"avg_degree", s.avg_degree},
                      {"rounds", s.rounds}});
  }
  j["levels"] = levels;
  j["nodes"] = net.physical.nodes.size();
  j["physical_links"] = net.physical.links.size();
  return j.dump(2);
}

void dump_tables(const MultiLevelNetwork& net, const std::string& dir) {
  namespace fs = std::filesystem;
  for (const auto& [ref, ln] : net.levels) {
    const std::string level_dir =
        dir + "/" + std::to_string(ref.depth) + "_" + (ref.depth == 0 ? "root" : ref.to_string());
    fs::create_directories(level_dir);
    for (const auto& [owner, table] : ln.tables) {
      std::ofstream f(level_dir + "/" + owner.to_binary() + ".txt");
      table.dump(f);
    }
  }
}

int cmd_generate(const CommonArgs& a, const std::string& out_file) {
  const PhysicalNetwork net = a.no_restrict ? generate_network(a.cfg.gen, false)
                                            : generate_network(a.cfg.gen, true);
  save_network(net, out_file);
  std::cout << "wrote " << out_file << ": " << net.nodes.size() << " nodes, " << net.links.size()
            << " links\n";
  return 0;
}

int cmd_build(const CommonArgs& a, const std::string& tables_dir) {
  const MultiLevelNetwork net = build_multilevel(obtain_network(a), options_of(a));
  std::filesystem::create_directories(a.out_dir);
  write_file(a.out_dir + "/summary.json", build_summary_json(net));
  if (!tables_dir.empty()) dump_tables(net, tables_dir);
  std::cout << build_summary_json(net) << '\n';
  return 0;
}

int cmd_route(const CommonArgs& a, const std::string& from, const std::string& to) {
  const MultiLevelNetwork net = build_multilevel(obtain_network(a), options_of(a));
  const NodeId s = NodeId::parse_binary(from), d = NodeId::parse_binary(to);
  const RouteResult r = route(net, s, d);
  std::cout << "logical hops:";
  for (NodeId n : r.logical_hops) std::cout << ' ' << n.to_binary();
  std::cout << "\nlevels used:";
  for (uint16_t l : r.levels_used) std::cout << ' ' << l;
  std::cout << "\nphysical path:";
  for (NodeId n : r.physical_path) std::cout << ' ' << n.to_binary();
  std::cout << "\nhops: " << r.hop_count << '\n';
  return 0;
}

int cmd_degrees(CommonArgs& a) {
  const DegreeResult r = degree_experiment(a.cfg);
  std::filesystem::create_directories(a.out_dir);
  std::ofstream csv(a.out_dir + "/degrees.csv");
  write_degrees_csv(r, csv);
  write_file(a.out_dir + "/summary.json", degrees_summary_json(r));
  std::cout << "wrote " << a.out_dir << "/degrees.csv (" << r.rows.size() << " rows)\n";
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  return 0;
}

int cmd_stretch(CommonArgs& a) {
  const StretchResult r = stretch_experiment(a.cfg);
  std::filesystem::create_directories(a.out_dir);
  std::ofstream csv(a.out_dir + "/stretch.csv");
  write_stretch_csv(r, csv);
  write_file(a.out_dir + "/summary.json", stretch_summary_json(r));
  std::cout << "wrote " << a.out_dir << "/stretch.csv (" << r.rows.size()
            << " rows), hops-vs-N slope " << r.hops_vs_n_slope << '\n';
  return 0;
}

int cmd_check(const CommonArgs& a, double fault) {
  const MultiLevelNetwork net = build_multilevel(obtain_network(a), options_of(a));
  const DeliveryReport rep =
      delivery_check(net, a.cfg.delivery_samples, a.cfg.gen.seed, fault);
  nlohmann::json j{{"pairs_tested", rep.pairs_tested},
                   {"failures", rep.failures},
                   {"loop_violations", rep.loop_violations}};
  std::cout << j.dump(2) << '\n';
  return rep.failures == 0 && rep.loop_violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BMLRP multi-level DHT routing: builder, router and experiments"};
  app.require_subcommand(1);

  CommonArgs a;
  std::string out_file = "network.net";
  std::string tables_dir;
  std::string from, to;
  double fault = 0;

  auto* gen = app.add_subcommand("generate", "generate a physical network file");
  add_common(gen, a);
  gen->add_option("--file", out_file, "output network file");
  gen->add_flag("--no-restrict", a.no_restrict, "keep all components");

  auto* build = app.add_subcommand("build", "build the multi-level structure");
  add_common(build, a);
  build->add_option("--net", a.net_file, "input network file (generated otherwise)");
  build->add_option("--dump-tables", tables_dir, "write per-node table dumps to this directory");

  auto* rt = app.add_subcommand("route", "route between two addresses");
  add_common(rt, a);
  rt->add_option("--net", a.net_file, "input network file");
  rt->add_option("--from", from, "source address (binary)")->required();
  rt->add_option("--to", to, "destination address (binary)")->required();

  auto* deg = app.add_subcommand("degrees", "average degree per level experiment");
  add_common(deg, a);
  deg->add_option("--reps", a.cfg.repetitions, "seeds per configuration");

  auto* str = app.add_subcommand("stretch", "path stretch experiment");
  add_common(str, a);
  str->add_option("--reps", a.cfg.repetitions, "seeds per size");
  str->add_option("--samples", a.cfg.stretch_samples, "pairs sampled per build");
  str->add_option("--sizes", a.cfg.stretch_sizes, "network sizes to sweep");

  auto* chk = app.add_subcommand("check", "delivery check over a built network");
  add_common(chk, a);
  chk->add_option("--net", a.net_file, "input network file");
  chk->add_option("--samples", a.cfg.delivery_samples, "pairs sampled for large networks");
  chk->add_option("--inject-fault", fault, "drop this record fraction first (failure harness)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate(a, out_file);
    if (build->parsed()) return cmd_build(a, tables_dir);
    if (rt->parsed()) return cmd_route(a, from, to);
    if (deg->parsed()) return cmd_degrees(a);
    if (str->parsed()) return cmd_stretch(a);
    if (chk->parsed()) return cmd_check(a, fault);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
