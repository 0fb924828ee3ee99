// mcshane: command-line front end for the verification campaigns.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "mcshane/cli.hpp"

namespace fs = std::filesystem;
using mcshane::RunConfig;

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

int write_files(const mcshane::CommandResult& r, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  for (const auto& [name, content] : r.files) {
    std::ofstream f(fs::path(dir) / name, std::ios::binary);
    f << content;
    if (!f) {
      std::cerr << "cannot write " << (fs::path(dir) / name).string() << "\n";
      return 2;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gap-angle identity verification on closed hyperbolic surfaces with a marked point"};
  app.require_subcommand(1);

  std::string config_file, surface, fn_text, cutoffs_text, precision, out_dir;
  double bound = 0.0;
  std::int64_t rays = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::size_t max_candidates = 0;
  int grid = 0;
  bool inject = false;
  std::string topo;
  double l_cuff = 0, l_loop = 0, tau = 0, delta = 0;
  int wraps = 0;

  const std::map<std::string, std::string> blurbs{
      {"verify-identity", "enumerate half-pants, sum their gaps and cross-check with rays"},
      {"markov", "partial sums over the Markov tree for the punctured torus"},
      {"twz-checks", "compare the two forms of the torus summand on a grid"},
      {"sparsity", "fraction of rays still simple at each cutoff"},
      {"gap", "evaluate one gap from explicit parameters"},
      {"enumerate", "list geodesic loops and their classification"}};

  std::vector<CLI::App*> subs;
  for (const auto& name : mcshane::command_names()) {
    const auto it = blurbs.find(name);
    CLI::App* s = app.add_subcommand(name, it == blurbs.end() ? "" : it->second);
    s->add_option("--config", config_file, "JSON config file; flags override its keys");
    s->add_option("--surface", surface, "octagon or custom");
    s->add_option("--fn", fn_text, "custom surface: L1,t1,L2,t2,L3,t3");
    s->add_option("--bound", bound, "length bound");
    s->add_option("--rays", rays, "number of rays");
    s->add_option("--seed", seed, "RNG seed");
    s->add_option("--cutoffs", cutoffs_text, "comma-separated arclength cutoffs");
    s->add_option("--precision", precision, "double or extended");
    s->add_option("--out", out_dir, "output directory");
    s->add_option("--threads", threads, "worker threads (0: all cores)");
    s->add_option("--max-candidates", max_candidates, "enumeration budget");
    s->add_option("--grid", grid, "twz-checks grid size");
    s->add_flag("--inject-failure", inject, "twz-checks: perturb one formula (harness self-test)");
    s->add_option("--type", topo, "gap: embedded, thrice-holed or one-holed-torus");
    s->add_option("--l-cuff", l_cuff, "gap: cuff length");
    s->add_option("--l-loop", l_loop, "gap: loop length");
    s->add_option("--tau", tau, "gap: tau");
    s->add_option("--delta", delta, "gap: delta");
    s->add_option("--n", wraps, "gap: signed wrap count");
    subs.push_back(s);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* chosen = nullptr;
  for (CLI::App* s : subs)
    if (s->parsed()) chosen = s;
  auto given = [&](const char* flag) { return chosen->count(flag) > 0; };

  RunConfig cfg;
  try {
    if (!config_file.empty()) {
      std::ifstream f(config_file);
      if (!f) throw mcshane::Error(mcshane::ErrorCode::InvalidConfig, "cannot read " + config_file);
      nlohmann::json j;
      try {
        f >> j;
      } catch (const nlohmann::json::exception& e) {
        throw mcshane::Error(mcshane::ErrorCode::InvalidConfig, e.what());
      }
      cfg = mcshane::config_from_json(j, cfg);
    }
    nlohmann::json o = nlohmann::json::object();
    if (given("--surface")) o["surface"] = surface;
    if (given("--fn")) {
      const auto v = parse_list(fn_text);
      if (v.size() != 6) throw mcshane::Error(mcshane::ErrorCode::InvalidConfig, "--fn needs six numbers");
      o["fenchel_nielsen"] = {{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}};
      if (!given("--surface")) o["surface"] = "custom";
    }
    if (given("--bound")) o["length_bound"] = bound;
    if (given("--rays")) o["rays"] = rays;
    if (given("--seed")) o["seed"] = seed;
    if (given("--cutoffs")) o["cutoffs"] = parse_list(cutoffs_text);
    if (given("--precision")) o["precision"] = precision;
    if (given("--out")) o["output_dir"] = out_dir;
    if (given("--threads")) o["threads"] = threads;
    if (given("--max-candidates")) o["max_candidates"] = max_candidates;
    if (given("--grid")) o["grid_size"] = grid;
    if (inject) o["inject_failure"] = true;
    nlohmann::json g = nlohmann::json::object();
    if (given("--type")) g["topo_type"] = topo;
    if (given("--l-cuff")) g["l_cuff"] = l_cuff;
    if (given("--l-loop")) g["l_loop"] = l_loop;
    if (given("--tau")) g["tau"] = tau;
    if (given("--delta")) g["delta"] = delta;
    if (given("--n")) g["n"] = wraps;
    if (!g.empty()) o["gap_params"] = g;
    cfg = mcshane::config_from_json(o, cfg);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    const mcshane::CommandResult r = mcshane::run_command(chosen->get_name(), cfg);
    std::cout << r.summary;
    const int w = write_files(r, cfg.output_dir);
    return w != 0 ? w : r.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
