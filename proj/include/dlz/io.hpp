#pragma once

#include <iosfwd>
#include <string>

#include "dlz/assembly.hpp"
#include "dlz/atomic.hpp"
#include "dlz/model.hpp"
#include "dlz/msdecomp.hpp"

namespace dlz {

/// Reads a system from JSON: n_a, n_b, couplings (row-major [re, im] pairs,
/// in units of chirp_rate^(1/2) unless chirp_rate is 1), optional chirp_rate
/// (default 1), tau_i, tau_f. Unknown keys are ignored, so every export below
/// that carries these fields can be read back. Throws ParseError for
/// malformed text or missing/mistyped fields, InvalidInput for values the
/// model rejects.
DegenerateLZSystem parse_system(const std::string& text);
DegenerateLZSystem read_system_file(const std::string& path);

/// The ingestion fields of `system`, caller labelling, unscaled couplings.
std::string system_json(const DegenerateLZSystem& system);

/// System fields plus lambdas, n_dark, a_unitary, b_unitary, swapped and the
/// residuals of the oriented decomposition.
std::string decomposition_json(const DegenerateLZSystem& system, const MSDecomposition& decomp);

/// basis, tau_i, tau_f, method, gauge, n, entries (row-major [re, im]),
/// unitarity_defect and the number of channels that fell back to direct
/// integration.
std::string propagator_json(const SystemSolution& solution);

/// CSV i,f,P,status with 0-based caller indices, one row per pair, i major.
void write_probability_csv(std::ostream& out, const Propagator& u, const ConvergenceVerdict& v);

/// CSV i,f,status,reason.
void write_verdict_csv(std::ostream& out, const ConvergenceVerdict& v);

/// System fields of the chain (couplings as built, chirp_rate 1) with labels,
/// epsilon, theta and xi, plus the other chain under "smaller".
std::string atomic_json(const AtomicTransition& t, const SubsystemSplit& split, double tau_i,
                        double tau_f);

}  // namespace dlz
