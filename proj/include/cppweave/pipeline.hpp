#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cppweave/dot_export.hpp"
#include "cppweave/grouping.hpp"
#include "cppweave/parity.hpp"
#include "cppweave/serialize.hpp"
#include "cppweave/trails.hpp"

namespace cppweave {

/// Pipeline stages in execution order; `All` runs every one.
enum class Stage { Solve, Convert, Verify, Report, ExportDot, All };

std::string to_string(Stage s);
Stage stage_from_string(const std::string& s);

struct RunConfig {
  std::string topology_path;
  std::string demands_path;
  Mode mode = Mode::Strict;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  Stage stage = Stage::All;
  Metric metric = Metric::Length;
  bool details = false;  // every verdict in verification.txt
};

struct GroupCensus {
  std::size_t count = 0;
  std::vector<std::size_t> sizes;  // by group id
  std::vector<DemandId> apsed;
};

struct MetricsReport {
  double working = 0.0;
  double spp_spare = 0.0;
  double scap_spp = 0.0;
  std::optional<double> cpp_protection;
  std::optional<double> cep_savings;
  std::optional<double> extra_capacity;
  std::optional<double> scap_cpp;
  std::optional<GroupCensus> census;
  std::optional<bool> verified;
  std::size_t unrecovered = 0;
  std::string spp_hash;
};

json to_json(const MetricsReport& m);
std::string render_report(const MetricsReport& m);

/// Everything the pipeline computes, held in memory.
struct PipelineState {
  Topology topology;
  DemandSet demands;
  SppSolution spp;
  std::optional<CppDesign> design;
  std::vector<TrailHierarchy> trails;
  std::optional<VerificationReport> verification;

  MetricsReport metrics() const;
};

/// Solve, convert (grouping, cycle elimination, trails) and verify.
PipelineState run_in_memory(const Topology& t, const DemandSet& demands, Mode mode,
                            std::uint64_t seed, Metric metric = Metric::Length,
                            Stage upto = Stage::All);

struct RunResult {
  int exit_code = 0;
  std::optional<MetricsReport> report;
  std::vector<std::string> artifacts;  // file names written, in order
  std::string error;                   // "<stage>: <cause>" on failure
};

/// Exit codes.
inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitVerifyFailed = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitInputError = 4;

/// Runs the stages up to `cfg.stage`, writing each stage's artifact into
/// `cfg.out_dir` as soon as it exists.
RunResult run_pipeline(const RunConfig& cfg);

/// Pass/fail table, one row per failed link; details lists every verdict.
std::string render_verification(const VerificationReport& r, bool details);

}  // namespace cppweave
