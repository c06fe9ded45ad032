#pragma once

#include <ostream>
#include <string>
#include <string_view>

#include <yaml-cpp/yaml.h>

#include "flatsat/simulation.hpp"

namespace flatsat {

/// Column header of the trace CSV, one row per recorded step:
///   run, t, x, y, z, vx, vy, vz, x_ref .. vz_ref, v1_unsat .. v3_unsat,
///   v1, v2, v3, thrust, roll, pitch, lyapunov, lambda, saturated (0/1),
///   active (none|ball|cone|halfspace), in_u (0/1), in_vc (0/1).
/// Reals are printed with 17 significant digits.
std::string_view trace_csv_header();

void write_trace_csv(std::ostream& out, const Trace& trace, int run_id, bool with_header = true);

/// Metrics and monitor status of one run as a YAML mapping.
YAML::Node summary_node(const Metrics& m, const Trace& trace);

/// Emits a node with 17-digit doubles.
std::string emit_yaml(const YAML::Node& node);

}  // namespace flatsat
