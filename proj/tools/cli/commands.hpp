#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli/config.hpp"
#include "kcontract/error.hpp"

namespace kcontract::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Stable process exit codes.
enum ExitCode : int {
  kExitPass = 0,
  kExitCertifiedFail = 1,
  kExitParse = 2,
  kExitCapacity = 3,
  kExitMissingBounds = 4,
  kExitInternal = 5,
};

int exit_code_for(Errc code) noexcept;

/// Writes to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

struct CompoundArgs {
  std::string input;
  int k = 1;
  std::string mode = "mult";
  std::string out;
};

struct CertifyArgs {
  std::string config;
  bool json = false;
  std::string out;
};

struct SimulateArgs {
  std::string config;
  std::string x0;
  int random = 0;
  std::uint64_t seed = 0;
  std::optional<int> k;
  double t_end = 50.0;
  double dt = 1e-3;
  double lo = -3.0;
  double hi = 3.0;
  int record_every = 0;  // 0: about one sample per 0.01 time units
  double tol = 1e-4;
  std::string outdir = "kcontract_sim";
};

struct DemoArgs {
  int trajectories = 100;
  std::uint64_t seed = 7;
  double t_end = 200.0;
  double dt = 1e-3;
  std::string json_out;
  std::string outdir;
};

/// Certification report for a parsed config.
nlohmann::json certify_report(const SystemConfig& cfg);

int cmd_compound(const CompoundArgs& args, std::ostream& out, std::ostream& err);
int cmd_certify(const CertifyArgs& args, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);
int cmd_demo_hopfield(const DemoArgs& args, std::ostream& out, std::ostream& err);

/// Full command-line entry point; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kcontract::cli
