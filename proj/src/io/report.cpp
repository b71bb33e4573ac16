#include <cstdio>

#include "hierlyap/io.hpp"

namespace hierlyap::io {
namespace {

using ojson = nlohmann::ordered_json;

std::string_view to_string(gains::MuMethod m) {
  return m == gains::MuMethod::Analytic ? "analytic" : "sampled";
}

ojson certificate_json(const certify::Certificate& cert) {
  ojson o;
  o["kind"] = certify::to_string(cert.kind);
  o["c"] = cert.c;
  o["v_min"] = cert.v_min;
  o["v_x0"] = cert.v_x0;
  o["verify_eig"] = cert.verify_eig;
  ojson trace = ojson::array();
  for (const certify::StepRecord& s : cert.trace) {
    ojson step;
    step["step"] = s.step;
    step["epsilon"] = s.epsilon;
    step["ceiling"] = s.ceiling;
    step["accepted"] = s.accepted;
    if (s.accepted) {
      step["v_x0"] = s.v_x0;
      step["v_min"] = s.v_min;
    }
    trace.push_back(std::move(step));
  }
  o["trace"] = std::move(trace);
  return o;
}

void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

nlohmann::ordered_json make_report(const certify::Assessment& a, const ReportOptions& options) {
  ojson r;
  r["certified"] = a.verdict.certified;
  r["reason"] = certify::to_string(a.verdict.reason);
  r["kind"] = certify::to_string(a.matrix.kind);
  r["subsystems"] = a.gains.size();
  r["x0"] = a.x0;

  ojson g;
  ojson lambda = ojson::array(), mu = ojson::array(), method = ojson::array();
  for (const gains::SubsystemGains& s : a.gains.per_subsystem) {
    lambda.push_back(s.lambda);
    mu.push_back(s.mu);
    method.push_back(to_string(s.mu_method));
  }
  g["lambda"] = std::move(lambda);
  g["mu"] = std::move(mu);
  g["mu_method"] = std::move(method);
  ojson conservative = ojson::array();
  for (const auto& [k, j] : a.gains.conservative) conservative.push_back({k + 1, j + 1});
  g["conservative_entries"] = std::move(conservative);
  r["gains"] = std::move(g);

  ojson m;
  m["diagonally_dominant"] = a.dominance.dominant;
  m["row_sums"] = a.dominance.row_sums;
  if (!a.dominance.row_sums.empty()) {
    std::size_t worst = 0;
    for (std::size_t k = 1; k < a.dominance.row_sums.size(); ++k)
      if (a.dominance.row_sums[k] > a.dominance.row_sums[worst]) worst = k;
    m["worst_row"] = worst + 1;
    m["worst_row_sum"] = a.dominance.row_sums[worst];
  }
  r["structure_matrix"] = std::move(m);

  r["certificate"] = a.verdict.certificate ? certificate_json(*a.verdict.certificate) : ojson(nullptr);

  if (options.include_timing) {
    ojson t;
    t["gains"] = a.timings.gains_ms;
    t["structure"] = a.timings.structure_ms;
    t["scaling"] = a.timings.scaling_ms;
    t["adapt"] = a.timings.adapt_ms;
    r["timing_ms"] = std::move(t);
  }
  return r;
}

std::string dump_report(const nlohmann::ordered_json& report) { return report.dump(2) + "\n"; }

std::string trajectory_csv(const simulate::Trajectory& traj) {
  const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
  std::string out = "t";
  for (std::size_t i = 0; i < n; ++i) out += ",x_" + std::to_string(i + 1);
  if (traj.v_values) out += ",V";
  out += '\n';
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    append_number(out, traj.times[s]);
    for (double v : traj.states[s]) {
      out += ',';
      append_number(out, v);
    }
    if (traj.v_values) {
      out += ',';
      append_number(out, (*traj.v_values)[s]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace hierlyap::io
