#include "mcshane/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "mcshane/enumeration.hpp"
#include "mcshane/markov.hpp"
#include "mcshane/philox.hpp"
#include "mcshane/raysim.hpp"

namespace mcshane {

using nlohmann::json;

namespace {

const char* to_string(PrecisionMode p) { return p == PrecisionMode::Double ? "double" : "extended"; }

PrecisionMode precision_from(const std::string& s) {
  if (s == "double") return PrecisionMode::Double;
  if (s == "extended") return PrecisionMode::Extended;
  throw Error(ErrorCode::InvalidConfig, "precision must be 'double' or 'extended', got '" + s + "'");
}

TopoType topo_from(const std::string& s) {
  for (TopoType t : {TopoType::Embedded, TopoType::ThriceHoled, TopoType::OneHoledTorus})
    if (s == mcshane::to_string(t)) return t;
  throw Error(ErrorCode::InvalidConfig, "unknown half-pants type '" + s + "'");
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

SimulationOptions sim_options(const RunConfig& c) {
  SimulationOptions o;
  o.threads = c.threads;
  return o;
}

EnumerationOptions enum_options(const RunConfig& c) {
  EnumerationOptions o;
  o.threads = c.threads;
  o.max_candidates = c.max_candidates;
  return o;
}

json record_json(const HalfPantsRecord& r) {
  return {{"word", r.canonical_word},   {"topo_type", mcshane::to_string(r.params.topo_type)},
          {"l_cuff", r.params.l_cuff}, {"l_loop", r.params.l_loop},
          {"tau", r.params.tau},       {"delta", r.params.delta},
          {"n", r.params.n},           {"gap", r.gap.gap.value}};
}

json excluded_json(const std::vector<ExcludedLoop>& excluded) {
  // Counted by error code, the prefix of the message up to the first colon.
  std::map<std::string, int> counts;
  for (const auto& e : excluded) counts[e.reason.substr(0, e.reason.find(':'))]++;
  return counts;
}

double gap_sum(const std::vector<HalfPantsRecord>& records) {
  // Ascending order, so small terms are not swamped.
  std::vector<double> v;
  for (const auto& r : records) v.push_back(r.gap.gap.value);
  std::sort(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

void RunConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::InvalidConfig, m); };
  if (surface != "octagon" && surface != "custom") fail("surface must be 'octagon' or 'custom'");
  if (surface == "custom" && fenchel_nielsen.size() != 3) fail("custom surface needs three (length, twist) pairs");
  if (!(length_bound > 0.0)) fail("length bound must be positive");
  if (rays <= 0) fail("ray count must be positive");
  if (cutoffs.empty()) fail("cutoff list is empty");
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (!(cutoffs[i] > 0.0) || (i > 0 && !(cutoffs[i] > cutoffs[i - 1]))) {
      fail("cutoffs must be positive and strictly increasing");
    }
  }
  if (grid_size <= 0) fail("grid size must be positive");
  if (max_candidates == 0) fail("candidate cap must be positive");
}

json to_json(const RunConfig& c) {
  json fn = json::array();
  for (const auto& p : c.fenchel_nielsen) fn.push_back({p.length, p.twist});
  return {{"surface", c.surface},
          {"fenchel_nielsen", fn},
          {"length_bound", c.length_bound},
          {"rays", c.rays},
          {"cutoffs", c.cutoffs},
          {"seed", c.seed},
          {"precision", to_string(c.precision)},
          {"max_candidates", c.max_candidates},
          {"grid_size", c.grid_size},
          {"inject_failure", c.inject_failure},
          {"gap_params",
           {{"topo_type", mcshane::to_string(c.gap_params.topo_type)},
            {"l_cuff", c.gap_params.l_cuff},
            {"l_loop", c.gap_params.l_loop},
            {"tau", c.gap_params.tau},
            {"delta", c.gap_params.delta},
            {"n", c.gap_params.n}}}};
}

RunConfig config_from_json(const json& in, RunConfig c) {
  const json& j = in.contains("config") && in["config"].is_object() ? in["config"] : in;
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
  try {
    if (j.contains("surface")) c.surface = j["surface"].get<std::string>();
    if (j.contains("fenchel_nielsen")) {
      c.fenchel_nielsen.clear();
      for (const auto& p : j["fenchel_nielsen"]) c.fenchel_nielsen.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    if (j.contains("length_bound")) c.length_bound = j["length_bound"].get<double>();
    if (j.contains("rays")) c.rays = j["rays"].get<std::int64_t>();
    if (j.contains("cutoffs")) c.cutoffs = j["cutoffs"].get<std::vector<double>>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("precision")) c.precision = precision_from(j["precision"].get<std::string>());
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("threads")) c.threads = j["threads"].get<unsigned>();
    if (j.contains("max_candidates")) c.max_candidates = j["max_candidates"].get<std::size_t>();
    if (j.contains("grid_size")) c.grid_size = j["grid_size"].get<int>();
    if (j.contains("inject_failure")) c.inject_failure = j["inject_failure"].get<bool>();
    if (j.contains("gap_params")) {
      const json& g = j["gap_params"];
      if (g.contains("topo_type")) c.gap_params.topo_type = topo_from(g["topo_type"].get<std::string>());
      if (g.contains("l_cuff")) c.gap_params.l_cuff = g["l_cuff"].get<double>();
      if (g.contains("l_loop")) c.gap_params.l_loop = g["l_loop"].get<double>();
      if (g.contains("tau")) c.gap_params.tau = g["tau"].get<double>();
      if (g.contains("delta")) c.gap_params.delta = g["delta"].get<double>();
      if (g.contains("n")) c.gap_params.n = g["n"].get<int>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  return c;
}

SurfaceGroup build_surface(const RunConfig& c) {
  if (c.surface == "octagon") return build_genus2_octagon();
  return build_custom(c.fenchel_nielsen);
}

std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

CommandResult cmd_verify_identity(const RunConfig& c) {
  c.validate();
  const SurfaceGroup group = build_surface(c);
  std::vector<ExcludedLoop> excluded;
  const auto records = enumerate_half_pants(group, c.length_bound, enum_options(c), &excluded);
  const double sum = gap_sum(records);
  const double cutoff = 2.0 * c.length_bound + group.diameter();
  const GapHistogram h = measure_gaps(group, c.rays, cutoff, c.seed, sim_options(c));

  json table = json::array(), cross = json::array();
  bool all_pass = true;
  double matched = 0.0;
  for (const auto& r : records) {
    json row = record_json(r);
    if (c.precision == PrecisionMode::Extended) row["gap_extended"] = extended::gap(r.params);
    table.push_back(row);
    const double analytic = r.gap.gap.value, empirical = h.measure(r.canonical_word);
    // Standard error under the hypothesis that the bucket has the analytic measure.
    const double se = bucket_stderr(analytic, c.rays);
    const bool pass = std::abs(analytic - empirical) <= 3.0 * se;
    all_pass = all_pass && pass;
    matched += empirical;
    cross.push_back({{"word", r.canonical_word},
                     {"analytic", analytic},
                     {"empirical", empirical},
                     {"stderr", se},
                     {"pass", pass}});
  }
  const double deficit = kTwoPi - sum;
  const bool deficit_ok = deficit >= -1e-6;
  json mc = to_json(h);
  mc.erase("buckets");
  mc["unmatched_measure"] = kTwoPi * (1.0 - static_cast<double>(h.simple_count + h.vertex_hit_count) /
                                                static_cast<double>(h.total_rays)) - matched;
  json report = {{"config", to_json(c)},
                 {"partial_sum", sum},
                 {"deficit", deficit},
                 {"records", table},
                 {"excluded", excluded_json(excluded)},
                 {"monte_carlo", mc},
                 {"monte_carlo_crosscheck", cross},
                 {"passed", all_pass && deficit_ok}};
  CommandResult out;
  out.exit_code = all_pass && deficit_ok ? 0 : 1;
  out.files["identity.json"] = dump_report(report);
  out.files["half_pants.csv"] = half_pants_csv(records);
  int failures = 0;
  for (const auto& x : cross) failures += !x["pass"].get<bool>();
  out.summary = "records " + std::to_string(records.size()) + ", partial sum " + fmt("%.12f", sum) +
                ", deficit " + fmt("%.12f", deficit) + ", cross-check failures " + std::to_string(failures) +
                " of " + std::to_string(cross.size()) + "\n";
  return out;
}

CommandResult cmd_markov(const RunConfig& c) {
  if (!(c.length_bound > 0.0)) throw Error(ErrorCode::InvalidConfig, "length bound must be positive");
  const auto gs = markov_geodesics(c.length_bound, c.max_candidates);
  const double sum = gs.empty() ? 0.0 : gs.back().partial_sum;
  const bool ok = sum <= 0.5 + 1e-12;
  CommandResult out;
  out.exit_code = ok ? 0 : 1;
  out.files["markov.csv"] = markov_csv(gs);
  out.files["markov.json"] = dump_report({{"config", to_json(c)},
                                          {"geodesics", gs.size()},
                                          {"partial_sum", sum},
                                          {"distance_to_half", 0.5 - sum},
                                          {"passed", ok}});
  out.summary = "geodesics " + std::to_string(gs.size()) + ", partial sum " + fmt("%.15f", sum) +
                ", distance to 1/2 " + fmt("%.3e", 0.5 - sum) + "\n";
  return out;
}

CommandResult cmd_twz_checks(const RunConfig& c) {
  c.validate();
  const int n = c.grid_size;
  double interior = 0.0, exterior = 0.0, conversion = 0.0;
  std::ostringstream csv;
  csv << "l1,l2,theta_p,interior_residual,exterior_residual,conversion_residual\n";
  for (int i = 0; i < n; ++i) {
    auto u = [&](std::uint32_t stream) { return Philox4x32::uniform(c.seed, static_cast<std::uint64_t>(i), stream); };
    double l1 = 6.0 * u(0), l2 = 6.0 * u(1);
    double theta_p = kPi * (1.0 - u(2));  // (0, pi]
    if (i == 0) theta_p = kPi;            // cusp-angle row
    if (i % 10 == 1) l1 = 0.0;            // cusp boundary rows
    double direct = twz_interior_summand(l1, l2, theta_p).value;
    if (c.inject_failure) direct *= 1.0 + 1e-6;
    const double ri = std::abs(direct - twz_interior_via_zipper(l1, l2, theta_p));
    const double re = std::abs(twz_exterior_summand(l1, l2, theta_p).value - twz_exterior_via_zipper(l1, l2, theta_p));
    const double rc = std::abs(zipper_length(l1, l2, theta_p) - zipper_length_constructed(l1, l2, theta_p));
    interior = std::max(interior, ri);
    exterior = std::max(exterior, re);
    conversion = std::max(conversion, rc);
    char buf[192];
    std::snprintf(buf, sizeof buf, "%.16g,%.16g,%.16g,%.16g,%.16g,%.16g\n", l1, l2, theta_p, ri, re, rc);
    csv << buf;
  }
  const bool ok = interior <= 1e-12 && exterior <= 1e-12 && conversion <= 1e-9;
  CommandResult out;
  out.exit_code = ok ? 0 : 1;
  out.files["twz.csv"] = csv.str();
  out.files["twz.json"] = dump_report({{"config", to_json(c)},
                                       {"max_interior_residual", interior},
                                       {"max_exterior_residual", exterior},
                                       {"max_conversion_residual", conversion},
                                       {"algebraic_tolerance", 1e-12},
                                       {"construction_tolerance", 1e-9},
                                       {"passed", ok}});
  out.summary = "interior " + fmt("%.3e", interior) + ", exterior " + fmt("%.3e", exterior) + ", conversion " +
                fmt("%.3e", conversion) + (ok ? "\n" : " (FAILED)\n");
  return out;
}

CommandResult cmd_sparsity(const RunConfig& c) {
  c.validate();
  const SurfaceGroup group = build_surface(c);
  const auto pts = sparsity_experiment(group, c.rays, c.cutoffs, c.seed, sim_options(c));
  bool monotone = true;
  for (std::size_t i = 1; i < pts.size(); ++i) monotone = monotone && pts[i].fraction <= pts[i - 1].fraction;
  json report = {{"config", to_json(c)}, {"nonincreasing", monotone}};
  json curve = json::array();
  for (const auto& p : pts) curve.push_back({{"cutoff", p.cutoff}, {"fraction", p.fraction}, {"stderr", p.stderr_}});
  report["curve"] = curve;
  bool separated = true;
  const auto at = [&](double t) {
    return std::find_if(pts.begin(), pts.end(), [&](const SparsityPoint& p) { return p.cutoff == t; });
  };
  if (at(5.0) != pts.end() && at(20.0) != pts.end()) {
    // Rays simple at 20 are simple at 5, so the drop is the fraction of rays
    // whose lasso closes in (5, 20]; its standard error is binomial.
    const double drop = at(5.0)->fraction - at(20.0)->fraction;
    const double se = std::sqrt(std::max(drop * (1.0 - drop), 0.0) / static_cast<double>(c.rays));
    separated = drop >= 5.0 * se && drop > 0.0;
    report["drop_5_to_20"] = {{"drop", drop}, {"stderr", se}, {"sigmas", se > 0.0 ? drop / se : 0.0},
                              {"pass", separated}};
  }
  report["passed"] = monotone && separated;
  CommandResult out;
  out.exit_code = monotone && separated ? 0 : 1;
  out.files["sparsity.csv"] = sparsity_csv(pts);
  out.files["sparsity.json"] = dump_report(report);
  std::ostringstream s;
  for (const auto& p : pts) s << "T " << fmt("%g", p.cutoff) << ": " << fmt("%.6f", p.fraction) << "\n";
  out.summary = s.str();
  return out;
}

CommandResult cmd_gap(const RunConfig& c) {
  GapBreakdown g;
  try {
    g = gap(c.gap_params);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidParameters || e.code() == ErrorCode::InvalidHalfPants) {
      throw Error(ErrorCode::InvalidConfig, e.what());
    }
    throw;
  }
  json terms = json::object();
  for (const auto& t : g.terms) terms[t.label] = t.value;
  json report = {{"config", to_json(c)}, {"gap", g.gap.value}, {"terms", terms}};
  if (c.precision == PrecisionMode::Extended) report["gap_extended"] = extended::gap(c.gap_params);
  CommandResult out;
  out.files["gap.json"] = dump_report(report);
  out.summary = "gap " + fmt("%.16g", g.gap.value) + "\n";
  return out;
}

CommandResult cmd_enumerate(const RunConfig& c) {
  c.validate();
  const SurfaceGroup group = build_surface(c);
  std::vector<ExcludedLoop> excluded;
  const auto records = enumerate_half_pants(group, c.length_bound, enum_options(c), &excluded);
  std::map<std::string, int> by_type;
  for (const auto& r : records) by_type[mcshane::to_string(r.params.topo_type)]++;
  const double sum = gap_sum(records);
  CommandResult out;
  out.files["half_pants.csv"] = half_pants_csv(records);
  out.files["enumerate.json"] = dump_report({{"config", to_json(c)},
                                             {"records", records.size()},
                                             {"by_type", by_type},
                                             {"excluded", excluded_json(excluded)},
                                             {"partial_sum", sum},
                                             {"deficit", kTwoPi - sum}});
  out.summary = "records " + std::to_string(records.size()) + ", partial sum " + fmt("%.12f", sum) + "\n";
  return out;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"verify-identity", "markov", "twz-checks",
                                              "sparsity",        "gap",    "enumerate"};
  return names;
}

CommandResult run_command(const std::string& name, const RunConfig& c) {
  try {
    if (name == "verify-identity") return cmd_verify_identity(c);
    if (name == "markov") return cmd_markov(c);
    if (name == "twz-checks") return cmd_twz_checks(c);
    if (name == "sparsity") return cmd_sparsity(c);
    if (name == "gap") return cmd_gap(c);
    if (name == "enumerate") return cmd_enumerate(c);
    throw Error(ErrorCode::InvalidConfig, "unknown command '" + name + "'");
  } catch (const Error& e) {
    const ErrorCode code = e.code();
    if (code != ErrorCode::BudgetExceeded && code != ErrorCode::InvalidConfig &&
        code != ErrorCode::ConstructionFailed) {
      throw;
    }
    CommandResult out;
    out.exit_code = 2;
    out.summary = std::string(e.what()) + "\n";
    if (code == ErrorCode::BudgetExceeded) {
      out.files["checkpoint.json"] =
          dump_report({{"command", name}, {"config", to_json(c)}, {"error", e.what()}, {"completed", false}});
    }
    return out;
  }
}

}  // namespace mcshane
