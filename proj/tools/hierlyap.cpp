#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hierlyap/certify.hpp"
#include "hierlyap/example.hpp"
#include "hierlyap/io.hpp"
#include "hierlyap/simulate.hpp"

namespace fs = std::filesystem;
using namespace hierlyap;

namespace {

enum Exit : int { kCertified = 0, kNotCertified = 1, kParse = 2, kAssumption = 3, kDivergence = 4 };

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

Vector initial_state(const io::NetworkConfig& cfg, const std::string& x0_arg) {
  Vector x0;
  if (!x0_arg.empty()) {
    x0 = io::parse_state_argument(x0_arg);
  } else if (cfg.initial_state) {
    x0 = *cfg.initial_state;
  } else {
    x0 = cfg.network.equilibrium();
  }
  if (x0.size() != cfg.network.state_dim())
    throw io::ParseError("--x0", "expected " + std::to_string(cfg.network.state_dim()) + " entries, got " +
                                     std::to_string(x0.size()));
  return x0;
}

certify::AssessOptions assess_options(const io::NetworkConfig& cfg, bool robust) {
  certify::AssessOptions opts;
  opts.kind = robust ? certify::Kind::Robust : certify::Kind::Nominal;
  opts.gains.mu.seed = io::effective_seed(cfg);
  return opts;
}

void print_summary(const certify::Assessment& a) {
  const certify::Verdict& v = a.verdict;
  std::printf("certified: %s (%s)\n", v.certified ? "yes" : "no", std::string(certify::to_string(v.reason)).c_str());
  std::printf("structure matrix: %s, %s\n", std::string(certify::to_string(a.matrix.kind)).c_str(),
              a.dominance.dominant ? "diagonally dominant" : "not diagonally dominant");
  if (!a.dominance.row_sums.empty()) {
    double worst = a.dominance.row_sums.front();
    for (double r : a.dominance.row_sums) worst = std::max(worst, r);
    std::printf("worst row sum: %.12g\n", worst);
  }
  if (v.certificate) {
    std::printf("V(x0) = %.12g, V_min = %.12g, lambda_max(M^T C + C M) = %.6g, steps = %zu\n",
                v.certificate->v_x0, v.certificate->v_min, v.certificate->verify_eig,
                v.certificate->trace.size());
  }
}

struct AssessArgs {
  std::string config;
  std::string x0;
  std::string out;
  bool robust = false;
  bool timing = false;
};

int cmd_assess(const AssessArgs& args) {
  const io::NetworkConfig cfg = io::load_config(args.config);
  const Vector x0 = initial_state(cfg, args.x0);
  const certify::Assessment a = certify::assess_detailed(cfg.network, x0, assess_options(cfg, args.robust));
  const std::string report = io::dump_report(io::make_report(a, {.include_timing = args.timing}));
  if (!args.out.empty()) write_file(args.out, report);
  print_summary(a);
  return a.verdict.certified ? kCertified : kNotCertified;
}

struct SimulateArgs {
  std::string config;
  std::string x0;
  std::string csv;
  double t_end = 5.0;
  double dt = 1e-3;
  std::size_t record_every = 1;
  bool with_certificate = false;
  bool robust = false;
};

int cmd_simulate(const SimulateArgs& args) {
  const io::NetworkConfig cfg = io::load_config(args.config);
  const Vector x0 = initial_state(cfg, args.x0);
  const simulate::SimConfig sim{args.t_end, args.dt, args.record_every};

  std::optional<certify::Assessment> a;
  std::optional<simulate::LyapunovProbe> probe;
  if (args.with_certificate) {
    a = certify::assess_detailed(cfg.network, x0, assess_options(cfg, args.robust));
    if (a->verdict.certificate) {
      probe.emplace(simulate::LyapunovProbe{*a->verdict.certificate, a->gains});
    } else {
      std::fprintf(stderr, "warning: no certificate (%s); V column omitted\n",
                   std::string(certify::to_string(a->verdict.reason)).c_str());
    }
  }

  simulate::Trajectory traj;
  try {
    traj = simulate::integrate(cfg.network, x0, sim, probe);
  } catch (const DivergenceError& e) {
    std::fprintf(stderr, "error: %s (last finite time %.17g)\n", e.what(), e.last_finite_time());
    return kDivergence;
  }
  if (!args.csv.empty()) {
    write_file(args.csv, io::trajectory_csv(traj));
  } else {
    std::cout << io::trajectory_csv(traj);
  }

  double final_max = 0.0;
  const Vector& xs = cfg.network.equilibrium();
  for (std::size_t i = 0; i < xs.size(); ++i) final_max = std::max(final_max, std::fabs(traj.states.back()[i] - xs[i]));
  std::fprintf(stderr, "t = %.6g, max |x - x*| = %.6g, rows = %zu\n", traj.times.back(), final_max,
               traj.states.size());
  if (probe) {
    const simulate::ValidationReport r =
        simulate::validate_certificate(traj, probe->certificate, probe->gains, xs);
    std::fprintf(stderr, "V monotone: %s, inside ball set: %s, inside invariant set: %s\n",
                 r.v_monotone ? "yes" : "no", r.in_ball_set ? "yes" : "no", r.in_invariant_set ? "yes" : "no");
  }
  return 0;
}

struct Check {
  int criterion;
  bool pass;
  std::string detail;
};

int cmd_reproduce(const std::string& out_dir, std::size_t drop_link) {
  io::NetworkConfig cfg = example::ring_config();
  if (drop_link > 0) {
    if (drop_link > cfg.network.couplings().size())
      throw io::ParseError("--drop-link", "coupling index out of range");
    const std::size_t removed = drop_link - 1;
    cfg.network = cfg.network.without_couplings(std::span(&removed, 1));
  }
  const fs::path dir(out_dir);
  write_file(dir / "config.json", io::dump_config(cfg));

  const Vector x0 = *cfg.initial_state;
  const certify::AssessOptions opts = assess_options(cfg, true);
  const certify::Assessment a = certify::assess_detailed(cfg.network, x0, opts);
  write_file(dir / "report.json", io::dump_report(io::make_report(a)));

  std::vector<Check> checks;
  char buf[256];

  {
    const Vector& rows = a.dominance.row_sums;
    bool all_negative = !rows.empty();
    double worst = -INFINITY;
    for (double r : rows) {
      all_negative = all_negative && r < 0.0;
      worst = std::max(worst, r);
    }
    bool pass = all_negative;
    if (drop_link == 0) pass = pass && std::fabs(worst - (-0.9)) <= 1e-12;
    std::snprintf(buf, sizeof buf, "all row sums negative: %s, worst row sum %.15g (expected -0.9)",
                  all_negative ? "yes" : "no", worst);
    checks.push_back({1, pass, buf});
  }

  const auto& cert = a.verdict.certificate;
  {
    const bool pass = a.verdict.certified && cert && cert->verify_eig < 0.0 && cert->v_x0 < cert->v_min;
    std::snprintf(buf, sizeof buf, "%s, V(x0) = %.12g, V_min = %.12g, lambda_max = %.6g",
                  std::string(certify::to_string(a.verdict.reason)).c_str(), cert ? cert->v_x0 : NAN,
                  cert ? cert->v_min : NAN, cert ? cert->verify_eig : NAN);
    checks.push_back({2, pass, buf});
  }

  if (cert) {
    const simulate::SimConfig sim{5.0, 1e-3, 1};
    bool pass = false;
    try {
      const simulate::Trajectory traj =
          simulate::integrate(cfg.network, x0, sim, simulate::LyapunovProbe{*cert, a.gains});
      write_file(dir / "trajectory.csv", io::trajectory_csv(traj));
      double final_max = 0.0;
      for (double v : traj.states.back()) final_max = std::max(final_max, std::fabs(v));
      const simulate::ValidationReport r =
          simulate::validate_certificate(traj, *cert, a.gains, cfg.network.equilibrium());
      pass = final_max < 1e-3 && r.all();
      std::snprintf(buf, sizeof buf, "max |x(5)| = %.6g, V monotone %s, in ball set %s, in invariant set %s",
                    final_max, r.v_monotone ? "yes" : "no", r.in_ball_set ? "yes" : "no",
                    r.in_invariant_set ? "yes" : "no");
    } catch (const DivergenceError& e) {
      std::snprintf(buf, sizeof buf, "diverged after t = %.6g", e.last_finite_time());
    }
    checks.push_back({3, pass, buf});
  } else {
    checks.push_back({3, false, "no certificate to validate"});
  }

  if (drop_link == 0) {
    const certify::ResilienceResult r =
        certify::resilience_sweep(cfg.network, certify::single_link_subsets(cfg.network), x0, opts);
    std::size_t certified = 0;
    for (const certify::Verdict& v : r.per_subset) certified += v.certified ? 1 : 0;
    std::snprintf(buf, sizeof buf, "%zu of %zu single-link removals certified, monotone %s", certified,
                  r.per_subset.size(), r.monotone ? "yes" : "no");
    checks.push_back({11, r.monotone && certified == r.per_subset.size(), buf});
  }

  bool ok = true;
  for (const Check& c : checks) {
    std::printf("%s criterion %d: %s\n", c.pass ? "PASS" : "FAIL", c.criterion, c.detail.c_str());
    ok = ok && c.pass;
  }
  if (!ok) {
    std::string failed;
    for (const Check& c : checks)
      if (!c.pass) failed += (failed.empty() ? "" : ", ") + std::to_string(c.criterion);
    std::fprintf(stderr, "reproduce-example: failed criterion %s\n", failed.c_str());
  }
  return ok ? 0 : 1;
}

std::vector<std::vector<std::size_t>> read_subsets(const std::string& path, std::size_t num_links) {
  std::ifstream in(path);
  if (!in) throw io::ParseError(path, "cannot open file");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw io::ParseError(path + ":byte " + std::to_string(e.byte), e.what());
  }
  if (!doc.is_array()) throw io::ParseError(path, "expected an array of coupling index lists");
  std::vector<std::vector<std::size_t>> subsets;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string loc = path + ":/" + std::to_string(i);
    if (!doc[i].is_array()) throw io::ParseError(loc, "expected an array of coupling indices");
    std::vector<std::size_t> s;
    for (const auto& v : doc[i]) {
      if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<std::size_t>() > num_links)
        throw io::ParseError(loc, "coupling index out of range");
      s.push_back(v.get<std::size_t>() - 1);
    }
    subsets.push_back(std::move(s));
  }
  return subsets;
}

int cmd_resilience(const std::string& config, const std::string& subsets_path, const std::string& x0_arg,
                   bool robust, const std::string& out) {
  const io::NetworkConfig cfg = io::load_config(config);
  const std::size_t links = cfg.network.couplings().size();
  const auto subsets = subsets_path.empty() ? certify::single_link_subsets(cfg.network)
                                            : read_subsets(subsets_path, links);
  std::optional<Vector> x0;
  if (!x0_arg.empty() || cfg.initial_state) x0 = initial_state(cfg, x0_arg);
  const certify::ResilienceResult r = certify::resilience_sweep(cfg.network, subsets, x0, assess_options(cfg, robust));

  nlohmann::ordered_json doc;
  doc["baseline"] = {{"certified", r.baseline.certified}, {"reason", certify::to_string(r.baseline.reason)}};
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::printf("%-24s %-10s %s\n", "removed", "certified", "reason");
  std::printf("%-24s %-10s %s\n", "(none)", r.baseline.certified ? "yes" : "no",
              std::string(certify::to_string(r.baseline.reason)).c_str());
  bool all = r.baseline.certified;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    std::string label;
    std::vector<std::size_t> one_based;
    for (std::size_t c : subsets[i]) {
      label += (label.empty() ? "" : ",") + std::to_string(c + 1);
      one_based.push_back(c + 1);
    }
    if (label.empty()) label = "(empty)";
    const certify::Verdict& v = r.per_subset[i];
    all = all && v.certified;
    std::printf("%-24s %-10s %s\n", label.c_str(), v.certified ? "yes" : "no",
                std::string(certify::to_string(v.reason)).c_str());
    rows.push_back({{"removed", one_based}, {"certified", v.certified}, {"reason", certify::to_string(v.reason)}});
  }
  doc["subsets"] = std::move(rows);
  doc["monotone"] = r.monotone;
  std::printf("monotone: %s\n", r.monotone ? "yes" : "no");
  if (!out.empty()) write_file(out, doc.dump(2) + "\n");
  return all ? kCertified : kNotCertified;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical Lyapunov stability certification for interconnected nonlinear networks"};
  app.require_subcommand(1);

  AssessArgs assess;
  auto* a = app.add_subcommand("assess", "Certify a network for an initial state");
  a->add_option("config", assess.config, "Network config (JSON)")->required();
  a->add_flag("--robust", assess.robust, "Use coupling bounds instead of nominal gains");
  a->add_option("--x0", assess.x0, "Initial state: inline list or JSON file");
  a->add_option("--out", assess.out, "Write the report here");
  a->add_flag("--timing", assess.timing, "Include per-stage timings in the report");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Integrate the network with RK4 and emit CSV");
  s->add_option("config", sim.config, "Network config (JSON)")->required();
  s->add_option("--x0", sim.x0, "Initial state: inline list or JSON file");
  s->add_option("--t-end", sim.t_end, "Final time")->capture_default_str();
  s->add_option("--dt", sim.dt, "Step size")->capture_default_str();
  s->add_option("--record-every", sim.record_every, "Record every n-th step")->capture_default_str();
  s->add_option("--csv", sim.csv, "Write CSV here instead of standard output");
  s->add_flag("--with-certificate", sim.with_certificate, "Add a V column from the assessed certificate");
  s->add_flag("--robust", sim.robust, "Certificate from the robust structure matrix");

  std::string out_dir = "example_out";
  std::size_t drop_link = 0;
  auto* r = app.add_subcommand("reproduce-example", "Build, certify and simulate the 20-subsystem ring");
  r->add_option("--out-dir", out_dir, "Directory for config.json, report.json, trajectory.csv")
      ->capture_default_str();
  r->add_option("--drop-link", drop_link, "Remove coupling k (1-based) before assessing");

  std::string res_config, res_subsets, res_x0, res_out;
  bool res_single = false, res_robust = false;
  auto* rs = app.add_subcommand("resilience", "Re-assess with links removed");
  rs->add_option("config", res_config, "Network config (JSON)")->required();
  auto* single = rs->add_flag("--single-links", res_single, "Drop each coupling in turn (default)");
  rs->add_option("--subsets", res_subsets, "JSON file: array of 1-based coupling index lists")->excludes(single);
  rs->add_option("--x0", res_x0, "Initial state: inline list or JSON file");
  rs->add_flag("--robust", res_robust, "Use coupling bounds instead of nominal gains");
  rs->add_option("--out", res_out, "Write the verdict list here");

  std::string gen_out;
  auto* g = app.add_subcommand("gen-example", "Write the built-in ring config");
  g->add_option("--out", gen_out, "Output path (standard output if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kParse;
  }

  try {
    if (a->parsed()) return cmd_assess(assess);
    if (s->parsed()) return cmd_simulate(sim);
    if (r->parsed()) return cmd_reproduce(out_dir, drop_link);
    if (rs->parsed()) return cmd_resilience(res_config, res_subsets, res_x0, res_robust, res_out);
    if (g->parsed()) {
      const std::string text = io::dump_config(example::ring_config());
      if (gen_out.empty()) {
        std::cout << text;
      } else {
        write_file(gen_out, text);
      }
      return 0;
    }
  } catch (const io::ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kParse;
  } catch (const AssumptionViolation& e) {
    std::fprintf(stderr, "assumption violated: %s\n", e.what());
    return kAssumption;
  } catch (const DivergenceError& e) {
    std::fprintf(stderr, "error: %s (last finite time %.17g)\n", e.what(), e.last_finite_time());
    return kDivergence;
  } catch (const ModelError& e) {
    std::fprintf(stderr, "model error: %s\n", e.what());
    return kParse;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kParse;
  }
  return kParse;
}
