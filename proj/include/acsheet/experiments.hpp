#pragma once

#include <string>
#include <vector>

#include "acsheet/config.hpp"
#include "acsheet/csv.hpp"

namespace acsheet {

// One verdict per acceptance criterion covered by the command.
struct Verdict {
  std::string id;
  bool pass = false;
  std::string detail;
  double runtime_s = 0.0;  // wall time of the producing block; not serialized
};

struct ExperimentReport {
  std::vector<Verdict> verdicts;
  std::vector<CsvTable> tables;
  std::vector<std::pair<std::string, std::string>> blobs;  // filename -> bytes

  void merge(ExperimentReport&& other);
  bool all_pass() const;
};

ExperimentReport run_simulate(const Config& cfg);      // C6, C7 + trajectory
ExperimentReport run_zdiag(const Config& cfg);         // C3, C4, C5
ExperimentReport run_greenbound(const Config& cfg);    // C1, C2
ExperimentReport run_pullback(const Config& cfg);      // C8
ExperimentReport run_absorb(const Config& cfg);        // C9
ExperimentReport run_squeeze(const Config& cfg);       // C10
ExperimentReport run_dimension(const Config& cfg);     // C11
ExperimentReport run_modes(const Config& cfg);         // C12
ExperimentReport run_inequalities(const Config& cfg);  // C13
ExperimentReport run_all(const Config& cfg);

// run a command by name; throws ConfigInvalid for unknown names
ExperimentReport run_command(const std::string& command, const Config& cfg);

std::string summary_text(const ExperimentReport& report);

// writes every table as <out_dir>/<name>.csv plus summary.txt and raw blobs
void write_report(const ExperimentReport& report, const std::string& out_dir);

}  // namespace acsheet
