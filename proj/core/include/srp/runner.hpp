#ifndef SRP_RUNNER_HPP
#define SRP_RUNNER_HPP

#include "srp/config.hpp"

namespace srp {

// Execute one subcommand: builds the tables, runs samplers/checks, writes
// the artifacts named in the config, and returns the report. Deterministic
// for a fixed (config, seed), independent of the worker count.
Report run(const ExperimentConfig& config);

}  // namespace srp

#endif
