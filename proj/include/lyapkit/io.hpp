#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lyapkit/certificates.hpp"

namespace lyap {

/// A system file: the system plus its named points and observables.
/// Rationals are written "p/q"; floats are accepted only inside
/// "observable ... quadratic" blocks and are converted to exact dyadics.
struct SystemDescription {
  DynamicalSystem system;
  std::map<std::string, State> points;
  std::map<std::string, Observable> observables;
};

/// Parse a system file. All-or-nothing: any syntax or validation problem
/// throws (ParseError carries line and column) and nothing is returned.
SystemDescription load_system(std::istream& in);
SystemDescription load_system_file(const std::string& path);
void write_system(std::ostream& out, const SystemDescription& d);

using CertificateDoc = std::variant<DeltaCertificate, LyapunovCertificate>;

/// Parse a certificate file against its system (states and times need the
/// space and timeline to be read back exactly).
CertificateDoc load_certificate(std::istream& in, const DynamicalSystem& sys);
CertificateDoc load_certificate_file(const std::string& path,
                                     const DynamicalSystem& sys);
void write_certificate(std::ostream& out, const DynamicalSystem& sys,
                       const DeltaCertificate& c);
void write_certificate(std::ostream& out, const DynamicalSystem& sys,
                       const LyapunovCertificate& c);
void write_certificate(std::ostream& out, const DynamicalSystem& sys,
                       const CertificateDoc& c);

/// FNV-1a over raw bytes; used for the report's input digests.
std::uint64_t fnv1a64(std::string_view bytes);
/// "fnv1a64:<16 hex digits>" of a file's contents.
std::string file_digest(const std::string& path);

/// The verdict document ("report"): a single JSON object with fixed field
/// names — command, inputs, verdict (PROVED|SAMPLED|FAIL), detail,
/// witnesses, timings. A FAIL verdict always carries its witness.
std::string render_report(
    const std::string& command,
    const std::vector<std::pair<std::string, std::string>>& inputs,
    const DynamicalSystem& sys, const Verdict& v, double total_ms);

/// step,state,value (finite) or step,x0..,value (euclidean) along the
/// trajectory at the horizon's sample times.
void trajectory_csv(std::ostream& out, const DynamicalSystem& sys,
                    const State& start, const Horizon& h,
                    const Observable& obs);

/// x,y,member over a square grid: member = observable(x) <= eps.
/// Euclidean only, dimension <= 2 (a 1-d space rasters along y = 0).
void sublevel_raster_csv(std::ostream& out, const StateSpace& sp,
                         const Observable& obs, const Rat& eps, const Rat& box,
                         unsigned resolution);

/// x,y,member over a square grid: member = d(x, center) <= radius.
void ball_raster_csv(std::ostream& out, const StateSpace& sp,
                     const State& center, const Rat& radius, const Rat& box,
                     unsigned resolution);

}  // namespace lyap
