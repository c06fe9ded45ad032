#include "flatsat/trace_io.hpp"

#include <fmt/format.h>

namespace flatsat {

namespace {

constexpr std::string_view kHeader =
    "run,t,x,y,z,vx,vy,vz,x_ref,y_ref,z_ref,vx_ref,vy_ref,vz_ref,"
    "v1_unsat,v2_unsat,v3_unsat,v1,v2,v3,thrust,roll,pitch,lyapunov,lambda,"
    "saturated,active,in_u,in_vc";

void put(std::string& line, double x) {
  line += fmt::format(",{:.17g}", x);
}

}  // namespace

std::string_view trace_csv_header() { return kHeader; }

void write_trace_csv(std::ostream& out, const Trace& trace, int run_id, bool with_header) {
  if (with_header) out << kHeader << '\n';
  std::string line;
  for (const TraceRow& r : trace.rows) {
    line = fmt::format("{}", run_id);
    put(line, r.t);
    for (int i = 0; i < 6; ++i) put(line, r.xi(i));
    for (int i = 0; i < 6; ++i) put(line, r.xi_ref(i));
    for (int i = 0; i < 3; ++i) put(line, r.v_unsat(i));
    for (int i = 0; i < 3; ++i) put(line, r.v(i));
    put(line, r.u.thrust);
    put(line, r.u.roll);
    put(line, r.u.pitch);
    put(line, r.lyapunov);
    put(line, r.lambda);
    line += fmt::format(",{},{},{},{}\n", r.saturated ? 1 : 0, to_string(r.active),
                        r.in_u ? 1 : 0, r.in_vc ? 1 : 0);
    out << line;
  }
}

YAML::Node summary_node(const Metrics& m, const Trace& trace) {
  YAML::Node n;
  n["steps"] = m.steps;
  n["clean"] = trace.clean();
  n["aborted"] = trace.aborted;
  if (trace.aborted) n["abort_reason"] = trace.abort_reason;
  n["violations"] = static_cast<int>(trace.violations.size());
  n["rms_position_error"] = m.rms_position_error;
  n["max_position_error"] = m.max_position_error;
  n["final_position_error"] = m.final_position_error;
  n["max_decay_violation"] = m.max_decay_violation;
  n["max_decay_ratio"] = m.max_decay_ratio;
  n["max_level_ratio"] = m.max_level_ratio;
  n["saturation_duty"] = m.saturation_duty;
  n["min_vc_margin"] = m.min_vc_margin;
  n["min_u_margin"] = m.min_u_margin;
  n["u_violations"] = m.u_violations;
  n["vc_violations"] = m.vc_violations;
  n["mean_control_seconds"] = m.mean_control_seconds;
  n["p99_control_seconds"] = m.p99_control_seconds;
  return n;
}

std::string emit_yaml(const YAML::Node& node) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << node;
  return std::string(out.c_str()) + "\n";
}

}  // namespace flatsat
