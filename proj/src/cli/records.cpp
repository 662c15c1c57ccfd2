#include "sel/cli/records.hpp"

#include <cmath>
#include <cstdio>

namespace sel::cli {

std::string format_number(double x)
{
    if (!std::isfinite(x)) {
        return "null";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string run_record_json(const SampleRecord& r)
{
    std::string s = "{\"schema\":\"";
    s += kRunSchema;
    s += "\",\"t\":" + format_number(r.t);
    s += ",\"E\":" + format_number(r.energy);
    s += ",\"dissipation\":" + format_number(r.dissipation);
    s += ",\"martingale_x\":" + format_number(r.martingale_x);
    s += ",\"trace_drift\":" + format_number(r.trace_drift);
    s += ",\"residual\":" + format_number(r.residual);
    s += ",\"local_sup\":" + format_number(r.local_sup);
    s += ",\"constraint_err\":" + format_number(r.constraint_err);
    s += ",\"divergence_err\":" + format_number(r.divergence_err);
    s += ",\"zeta\":" + (r.zeta ? format_number(*r.zeta) : std::string("null"));
    s += ",\"bubbling_count\":" + std::to_string(r.bubbling_count);
    s += "}";
    return s;
}

}  // namespace sel::cli
