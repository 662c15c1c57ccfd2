#pragma once

#include "sel/diagnostics.hpp"

#include <string>

namespace sel::cli {

inline constexpr const char* kRunSchema = "sel.run/1";

/// Formats a double with 17 significant digits (JSON-safe; non-finite
/// values become null).
std::string format_number(double x);

/// One NDJSON line (no trailing newline) with the fields
/// schema, t, E, dissipation, martingale_x, trace_drift, residual,
/// local_sup, constraint_err, divergence_err, zeta, bubbling_count.
std::string run_record_json(const SampleRecord& r);

}  // namespace sel::cli
