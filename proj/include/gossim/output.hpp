#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gossim/metrics.hpp"
#include "gossim/record.hpp"
#include "gossim/scenarios.hpp"

namespace gossim {

/// One row of summary.csv.
struct SummaryRow {
  std::string protocol;
  std::uint32_t tokens = 0;
  std::uint64_t seed = 0;
  std::uint64_t total_sends = 0;
  std::optional<Millis> t90;
  std::optional<double> savings_pct;
  double bound_fp = 0, bound_fcp = 0, bound_pbp = 0, bound_gcp = 0;
};

inline SummaryRow summarize(const RunRecord& rec, const RunRecord* flooding = nullptr) {
  SummaryRow row;
  row.protocol = rec.protocol;
  row.tokens = rec.tokens;
  row.seed = rec.seed;
  row.total_sends = total_software_sends(rec);
  row.t90 = time_to_fraction(convergence_series(rec, rec.injected_version), 0.9);
  if (flooding && total_software_sends(*flooding) > 0) row.savings_pct = savings(rec, *flooding);
  const auto p = theoretical_params(rec);
  row.bound_fp = bound_flooding(p);
  row.bound_fcp = bound_fcp(p);
  row.bound_pbp = bound_pbp(p);
  row.bound_gcp = bound_gcp(p);
  return row;
}

inline std::string convergence_csv(const ConvergenceSeries& s) {
  std::ostringstream o;
  o << "t_ms,count\n";
  for (const auto& p : s.points) o << p.t << ',' << p.count << '\n';
  return o.str();
}

inline std::string load_csv(const RunRecord& rec) {
  std::ostringstream o;
  o << "sends,node_count\n";
  for (const auto& [sends, nodes] : load_histogram(rec)) o << sends << ',' << nodes << '\n';
  return o.str();
}

inline constexpr const char* kSummaryHeader =
    "protocol,tokens,seed,total_sends,t90_ms,savings_pct,bound_fp,bound_fcp,bound_pbp,bound_gcp\n";

inline std::string summary_line(const SummaryRow& r) {
  using detail::fmt_double;
  std::ostringstream o;
  o << r.protocol << ',' << r.tokens << ',' << r.seed << ',' << r.total_sends << ',';
  if (r.t90) o << *r.t90;
  o << ',';
  if (r.savings_pct) o << fmt_double(*r.savings_pct);
  o << ',' << fmt_double(r.bound_fp) << ',' << fmt_double(r.bound_fcp) << ',' << fmt_double(r.bound_pbp) << ','
    << fmt_double(r.bound_gcp) << '\n';
  return o.str();
}

inline std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = kSummaryHeader;
  for (const auto& r : rows) out += summary_line(r);
  return out;
}

inline std::string metadata_text(const RunRecord& rec) {
  std::ostringstream o;
  for (const auto& [k, v] : rec.metadata) o << k << " = " << v << '\n';
  const auto& t = rec.tally;
  o << "injected_node = " << rec.injected_node.value << '\n';
  o << "periodic_beacons = " << t.periodic_beacons << '\n';
  o << "pull_beacons = " << t.pull_beacons << '\n';
  o << "beacon_receptions = " << t.beacon_receptions << '\n';
  o << "software_transmissions = " << t.software_transmissions << '\n';
  o << "software_receptions = " << t.software_receptions << '\n';
  o << "digest_failures = " << t.digest_failures << '\n';
  o << "mean_neighbourhood = " << detail::fmt_double(mean_neighbourhood(rec)) << '\n';
  return o.str();
}

/// Writes via a temporary sibling and a rename, so readers never see a
/// half-written file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

/// convergence.csv, load.csv, summary.csv and metadata.txt for one run.
inline void write_run(const std::filesystem::path& dir, const RunRecord& rec, const SummaryRow& row) {
  write_file_atomic(dir / "convergence.csv", convergence_csv(convergence_series(rec, rec.injected_version)));
  write_file_atomic(dir / "load.csv", load_csv(rec));
  write_file_atomic(dir / "summary.csv", summary_csv({row}));
  write_file_atomic(dir / "metadata.txt", metadata_text(rec));
}

}  // namespace gossim
