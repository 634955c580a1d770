#pragma once
// CSV emission: comma-delimited, RFC-4180-style quoting, LF line endings,
// floats at 6 significant digits, deterministic row order.

#include "ramp_sentinel/harness.hpp"
#include "ramp_sentinel/sdp.hpp"

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace ramp {

// One design attempt; `design` is meaningful only when feasible.
struct DesignRow {
    double alpha = 0.0;
    double theta = 0.0;
    double beta = 0.0;
    double dt = 0.0;
    bool feasible = false;
    FilterDesign design;
    std::string error;
};

[[nodiscard]] std::string csv_field(std::string_view raw);
[[nodiscard]] std::string csv_number(double v);

void write_design_csv(std::ostream& os, std::span<const DesignRow> rows);
void write_trace_csv(std::ostream& os, const RunTrace& trace, const CriterionReport& criterion);
void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows);
void write_compare_csv(std::ostream& os, std::span<const CompareRow> rows);

} // namespace ramp
