#include "ramp_sentinel/csv.hpp"

#include <cmath>
#include <cstdio>

namespace ramp {

std::string csv_field(std::string_view raw) {
    const bool needs_quotes = raw.find_first_of(",\"\n\r") != std::string_view::npos;
    if (!needs_quotes) return std::string(raw);
    std::string out = "\"";
    for (const char c : raw) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void write_design_csv(std::ostream& os, std::span<const DesignRow> rows) {
    os << "alpha,theta,beta,delta_t,mu1,mu2,mu3,sqrt_mu1,L1,L2,p11,p12,p22,feasible,error\n";
    for (const DesignRow& row : rows) {
        os << csv_number(row.alpha) << ',' << csv_number(row.theta) << ','
           << csv_number(row.beta) << ',' << csv_number(row.dt) << ',';
        if (row.feasible) {
            const FilterDesign& d = row.design;
            os << csv_number(d.mu1) << ',' << csv_number(d.mu2) << ',' << csv_number(d.mu3)
               << ',' << csv_number(std::sqrt(d.mu1)) << ',' << csv_number(d.L(0, 0)) << ','
               << csv_number(d.L(1, 0)) << ',' << csv_number(d.P(0, 0)) << ','
               << csv_number(d.P(0, 1)) << ',' << csv_number(d.P(1, 1)) << ",true,";
        } else {
            os << ",,,,,,,,,false,";
        }
        os << csv_field(row.error) << '\n';
    }
}

void write_trace_csv(std::ostream& os, const RunTrace& trace, const CriterionReport& criterion) {
    os << "cycle,x_all,x_cv,theta,z_f_all_in,z_f_all_out,z_f_cv_in,z_f_cv_out,z_x_cv,"
          "robust_x_all,robust_x_cv,open_loop,kalman,meter_rate,criterion_lhs,criterion_rhs\n";
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        const CycleRecord& r = trace.records[i];
        os << r.cycle << ',' << csv_number(r.x_all) << ',' << csv_number(r.x_cv) << ','
           << csv_number(r.theta) << ',' << csv_number(r.z.f_all_in) << ','
           << csv_number(r.z.f_all_out) << ',' << csv_number(r.z.f_cv_in) << ','
           << csv_number(r.z.f_cv_out) << ',' << csv_number(r.z.x_cv) << ','
           << csv_number(r.robust_x_all) << ',' << csv_number(r.robust_x_cv) << ','
           << csv_number(r.open_loop) << ',' << csv_number(r.kalman) << ','
           << csv_number(r.meter_rate) << ',';
        if (i < criterion.lhs.size()) {
            os << csv_number(criterion.lhs[i]) << ',' << csv_number(criterion.rhs[i]);
        } else {
            os << ',';
        }
        os << '\n';
    }
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
    os << "alpha,theta,noise_bound,feasible,sqrt_mu1,mean_sqrt_mu1_hat,mean_rmse,seeds,error\n";
    for (const SweepRow& row : rows) {
        os << csv_number(row.alpha) << ',' << csv_number(row.theta) << ','
           << csv_number(row.noise_bound) << ',' << (row.feasible ? "true" : "false") << ',';
        if (row.feasible) {
            os << csv_number(row.sqrt_mu1) << ',' << csv_number(row.mean_sqrt_mu1_hat) << ','
               << csv_number(row.mean_rmse) << ',' << row.seeds << ',';
        } else {
            os << ",,,0,";
        }
        os << csv_field(row.error) << '\n';
    }
}

void write_compare_csv(std::ostream& os, std::span<const CompareRow> rows) {
    os << "scenario,alpha,mean_sqrt_mu1_hat,mean_rmse,seeds\n";
    for (const CompareRow& row : rows) {
        os << csv_field(row.scenario) << ',' << csv_number(row.alpha) << ','
           << csv_number(row.mean_sqrt_mu1_hat) << ',' << csv_number(row.mean_rmse) << ','
           << row.seeds << '\n';
    }
}

} // namespace ramp
