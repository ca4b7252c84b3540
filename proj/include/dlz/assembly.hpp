#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dlz/lzcore.hpp"
#include "dlz/model.hpp"
#include "dlz/msdecomp.hpp"

namespace dlz {

enum class Basis { original, morris_shore };

struct Propagator {
  CMatrix matrix;
  Basis basis = Basis::original;
  double tau_i = 0.0;
  double tau_f = 0.0;
  Method method = Method::finite;

  double unitarity_defect() const { return dlz::unitarity_defect(matrix); }
};

/// Cayley-Klein data for every MS channel of one oriented decomposition.
struct ChannelSet {
  std::vector<CayleyKlein> cks;  ///< ordered like MSDecomposition::lambdas
  std::vector<Method> used;      ///< per channel; ode marks a fallback
  double tau_i = 0.0;
  double tau_f = 0.0;
  Method method = Method::finite;
  Gauge gauge = Gauge::symmetric;
  /// The channels run with detuning -tau. Happens when the caller's b-set is
  /// the larger one: in the oriented labelling the zero-energy set then sits
  /// second.
  bool reversed_chirp = false;

  std::size_t fallbacks() const;
};

ChannelSet solve_channels(const MSDecomposition& decomp, double tau_i, double tau_f,
                          Method method, bool reversed_chirp = false, double ode_tol = 1e-10);

/// 2x2 propagator of channel n, order (a-partner, b-partner).
CMatrix channel_block(const ChannelSet& channels, Eigen::Index n);

/// Propagator in the MS basis (rows of A, then rows of B): identity on the
/// dark states, channel blocks elsewhere. Oriented labelling.
Propagator ms_propagator(const MSDecomposition& decomp, const ChannelSet& channels);

/// Propagator in the oriented original basis. Built from projector sums, with
/// the dark projector replaced through completeness, and cross-checked
/// against S^dagger U_MS S; throws NumericalFailure if they differ by more
/// than 1e-12.
Propagator original_propagator(const MSDecomposition& decomp, const ChannelSet& channels);

/// Column i of the oriented original-basis propagator from the closed-form
/// amplitude sums. Throws InvalidInput for an index out of range.
CVector amplitude_formulas(const MSDecomposition& decomp, const ChannelSet& channels,
                           Eigen::Index i);

/// P(f, i) = |U_fi|^2.
RMatrix transition_probabilities(const Propagator& u);

enum class PairStatus { Defined, Undefined, AccidentallyDefined };

struct PairVerdict {
  PairStatus status = PairStatus::Defined;
  std::string reason;  ///< same-set, single-term, equal-couplings, divergent-interference
};

/// Whether each infinite-time probability P(f <- i) exists.
struct ConvergenceVerdict {
  Eigen::Index n = 0;
  std::vector<PairVerdict> pairs;  ///< index f * n + i

  const PairVerdict& at(Eigen::Index f, Eigen::Index i) const {
    return pairs[static_cast<std::size_t>(f * n + i)];
  }
};

/// Same-set pairs are Defined. A cross-set amplitude is a sum over channels
/// of terms carrying each channel's divergent phase; it settles only if at
/// most one term is nonzero (|a_in b_fn| > 1e-12 with Lambda_n > 0) or all
/// contributing Lambda_n agree to 1e-12. Oriented labelling;
/// `big_lambdas` ordered like decomp.lambdas.
ConvergenceVerdict classify_convergence(const MSDecomposition& decomp,
                                        const std::vector<double>& big_lambdas);

const char* to_string(PairStatus s);
const char* to_string(Method m);
const char* to_string(Basis b);

/// Everything computed for one system, reported in the caller labelling.
struct SystemSolution {
  MSDecomposition decomp;  ///< of the oriented coupling
  ChannelSet channels;
  Propagator propagator;   ///< caller labelling, original basis
};

/// Full propagator of `system` over its chirp interval. finite and asymptotic
/// go through the MS channels; ode integrates the whole system directly
/// (decomposition and channels are still filled in, by the finite method).
SystemSolution propagate(const DegenerateLZSystem& system, Method method,
                         double ode_tol = 1e-10);

/// Column of the caller-labelled propagator for caller initial state i, from
/// the closed-form amplitude sums.
CVector amplitude_column(const DegenerateLZSystem& system, const SystemSolution& sol,
                         Eigen::Index i);

/// Verdict in the caller labelling.
ConvergenceVerdict classify(const DegenerateLZSystem& system);

/// Limit of P(f <- i) for tau_f = -tau_i -> infinity from the asymptotic
/// channels; empty for Undefined pairs.
std::optional<double> infinite_time_probability(const DegenerateLZSystem& system,
                                                Eigen::Index f, Eigen::Index i);

/// P(f <- i) predicted by the asymptotic channels at the system's own
/// (tau_i, tau_f): the oscillation law of an Undefined pair, the limit value
/// of a Defined one.
double asymptotic_probability(const DegenerateLZSystem& system, Eigen::Index f, Eigen::Index i);

}  // namespace dlz
