#pragma once

#include <string>
#include <vector>

#include "shrinkerlab/barriers.hpp"
#include "shrinkerlab/flow.hpp"
#include "shrinkerlab/verify.hpp"

namespace shrinkerlab {

/// Shared field snapshot format: header "r,theta,u", one row per node,
/// row-major in (i, j), 17 significant digits.
void write_field_csv(const std::string& path, const Field& u);
Field read_field_csv(const std::string& path, GridPtr grid, bool symmetric_tag);

/// Diagnostics history CSV with the canonical header.
void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& history,
                           long stride = 1);

std::string barrier_certificate_json(const BarrierSet& bs, const BarrierResiduals& res);
void write_barrier_certificate(const std::string& path, const BarrierSet& bs,
                               const BarrierResiduals& res);

std::string report_json(const VerificationReport& report);
void write_report(const std::string& path, const VerificationReport& report);

/// %.17g rendering used by every artifact writer.
std::string format_g17(double x);

}  // namespace shrinkerlab
