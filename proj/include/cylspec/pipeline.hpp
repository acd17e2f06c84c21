#pragma once

#include <string>
#include <vector>

#include "cylspec/bisemigroup.hpp"
#include "cylspec/config.hpp"
#include "cylspec/eigensolve.hpp"
#include "cylspec/essential.hpp"
#include "cylspec/io.hpp"
#include "cylspec/mild.hpp"
#include "cylspec/realness.hpp"

namespace cylspec {

// Everything a run derives from the config before eigencomputations.
struct Instance {
  Nonlinearity f = Nonlinearity::cubic(0.25);
  double speed = 0.0;
  CylinderPotential V;
  SturmSpectrum plus;
  SturmSpectrum minus;
  EssentialSpectrumDescriptor essential;
};

Instance build_instance(const RunConfig& cfg);

struct EigsOutcome {
  DiscreteOperator op;
  std::vector<EigenResult> runs;  // one per shift
  EigenResult merged;             // deduplicated union, descending Re
  bool sym_compared = false;
  std::vector<double> sym_eigs;
  RealnessReport realness;
};

EigsOutcome run_eigs(const RunConfig& cfg, const Instance& inst);

struct DecayOutcome {
  Complex lambda0;
  double lambda0_residual = 0.0;
  Trajectory ray;  // forward ray z >= 0 of the projected trajectory
  double window_lo = 0.0;
  double window_hi = 0.0;
  DecayEstimate fit;
  DecayBound bound;
  double nu = 0.0;     // dichotomy rate used in the integral check
  double big_m = 0.0;  // dichotomy constant (Frobenius bound)
  GronwallReport gronwall;
};

DecayOutcome run_decay(const RunConfig& cfg, const Instance& inst,
                       const EigsOutcome& eigs);

struct DispersionOutcome {
  CylinderPotential constant;  // constant-in-z periodic-cell instance
  DispersionCheckResult check;
};

DispersionOutcome run_dispersion(const RunConfig& cfg, const Instance& inst);

// Command entry points; artifacts land in cfg.out_dir. Failures raise Error.
void cmd_wave(const RunConfig& cfg);
void cmd_essential(const RunConfig& cfg);
void cmd_eigs(const RunConfig& cfg);
void cmd_decay(const RunConfig& cfg);
void cmd_dispersion_check(const RunConfig& cfg);
void cmd_hypotheses(const RunConfig& cfg);
void cmd_report(const RunConfig& cfg);

// Full deterministic report (no timings; identical config + seed gives
// byte-identical serialization).
Json build_report(const RunConfig& cfg);

}  // namespace cylspec
