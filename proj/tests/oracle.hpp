#pragma once

// Test-only oracles. Everything here is computed independently of the
// library's simulation and optimization paths: gates become explicit dense
// 2^n x 2^n matrices applied by full matrix-vector products.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qbatch/qasm.hpp"
#include "qbatch/sim.hpp"

namespace oracle {

// Final-state probabilities from dense matrix products, pruned below 1e-12.
std::map<std::string, double> dense_probabilities(const qbatch::qasm::CircuitIR& c);

// Upper-tail probability of a chi-squared statistic with `dof` degrees of
// freedom (regularized incomplete gamma Q(dof/2, stat/2)).
double chi2_sf(double stat, int dof);

// Pearson statistic of observed counts against an exact distribution. Bins
// with expected count below 5 are merged into one remainder bin; returns the
// p-value.
double chi2_pvalue(const qbatch::sim::MeasurementCounts& counts,
                   const std::map<std::string, double>& probs);

}  // namespace oracle
