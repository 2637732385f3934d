#pragma once

// Command-line front end. Kept in a library so tests can drive it in-process.
//
//   heismag integrate     --metric g2 --killing V4 --lambda 1 --init 2,0,0,0,-4,8 --t-end 6.2832
//   heismag verify        --family g2-v4-circular --variant derivation --tol 1e-9
//   heismag verify        --trajectory run.csv --metric g2 --killing V4 --lambda 1
//   heismag killing-check --metric g1 --lambda 0.5 --samples 1000 --seed 42

#include <iosfwd>
#include <string>
#include <vector>

#include "heismag/dynamics.hpp"

namespace heismag::cli {

enum ExitCode : int {
  kPass = 0,
  kFail = 1,
  kUsage = 2,
  kIntegratorFailure = 3,
  kUnknownFamily = 4,
};

/// Exactly "t,x,y,z,xp,yp,zp,speed,first_integral".
extern const char* const kCsvHeader;

/// %.17g: enough digits for an exact round trip.
std::string format_double(double v);

void write_csv(std::ostream& os, const Trajectory& traj);
/// Parses a CSV written by write_csv. Throws DomainError on malformed input.
Trajectory read_csv(std::istream& is, const ModelParams& p, const MagneticField& field);

/// Directory for files written without an explicit path: $HEISMAG_OUT_DIR or ".".
std::string default_output_dir();

/// Runs the CLI on args (args[0] is the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace heismag::cli
