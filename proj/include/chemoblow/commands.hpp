#pragma once

#include <iosfwd>
#include <string>

#include "chemoblow/config.hpp"
#include "chemoblow/grid.hpp"

namespace chemoblow {

// "chemoblow 0.1.0 (<git revision>)"
const char* version_stamp();

// Materializes one initial field (constant, bump, spike, or r,value CSV).
RadialField build_field(const FieldSpec& spec, const RadialGrid& g);

// Builds (u0, v0, w0) at t = 0 from the config.
FullState build_initial(const RunConfig& cfg, const RadialGrid& g);

// Exit codes: 0 Completed, 2 BlewUp, 1 Inconclusive. Writes ledger.csv,
// snapshots/NNNN.csv, and report.json under the output directory.
int cmd_run(const RunConfig& cfg);

// Lockstep full-vs-reduced refinement study; writes equivalence.csv (for
// the finest dt) and refinement.csv. Exit 0 when the deviation refines at
// order >= 0.9 or already sits at round-off.
int cmd_compare(const RunConfig& cfg);

// Prints the MembershipReport as JSON; exit 0 when the data is in the class.
int cmd_membership(const RunConfig& cfg, std::ostream& out);

// Cartesian sweep over sweep.{chi,xi,sigma,mass}; writes phase.csv with
// deterministic row order regardless of the worker count.
int cmd_sweep(const RunConfig& cfg, int workers);

// Runs drive_to_class on the configured initial data; on success writes
// u0.csv, v0.csv, w0.csv and prints a JSON summary. Exit 0 on success.
int cmd_drive(const RunConfig& cfg, std::ostream& out);

} // namespace chemoblow
