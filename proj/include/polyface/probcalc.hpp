#ifndef POLYFACE_PROBCALC_HPP
#define POLYFACE_PROBCALC_HPP

#include <optional>

#include "polyface/types.hpp"

namespace polyface {

/**
 * The halfspace probability P_{m,M}: the chance that M points drawn
 * i.i.d. from a centrally symmetric distribution in general position in
 * R^m all fall in a common open halfspace,
 *
 *     P_{m,M} = 2^{-M+1} * sum_{l=0}^{m-1} C(M-1, l),
 *
 * equivalently the probability of at most m-1 heads in M-1 fair coin
 * tosses.  `value_exact` is the exact rational (computed for M up to
 * kWendelExactMaxPoints); `value_log` is the natural log, -inf when the
 * probability is zero, computed from the exact value when available and
 * otherwise by log-gamma with compensated summation.
 */
struct WendelProb {
    int m = 0;
    int M = 0;
    std::optional<Rational> value_exact;
    double value_log = 0.0;

    /// value_exact as a double; uses exp(value_log) on the log-only path.
    double value() const;
};

/// Largest M for which the exact big-integer path is taken.
inline constexpr int kWendelExactMaxPoints = 10000;

/// Throws std::invalid_argument when m < 0 or M < 1.
WendelProb wendel_probability(int m, int M);

/// Exact rational check of the coin-flip symmetry P_{m,M} + P_{M-m,M} = 1.
bool binomial_symmetry_check(int m, int M);

/**
 * Expected fraction of surviving k-faces of the projection of the orthant
 * or the hypercube under an n x N map with orthant-symmetric generic
 * nullspace: 1 - P_{N-n, N-k}.  The formula is the same for both shapes.
 */
Rational expected_face_ratio(const DimensionSpec& dims, Shape shape);

/// Base-e Shannon entropy with H(0) = H(1) = 0 by continuity.
double shannon_entropy(double gamma);

/// Exponent governing the weak threshold:
/// H(delta) + delta H(rho) - H(rho delta) - (1 - rho delta) log 2.
double psi_weak(const PhaseParams& p);

/// Exponent governing the strong threshold:
/// H(delta) + delta H(rho) - (1 - rho delta) log 2.
double psi_strong(const PhaseParams& p);

/// The same exponents on the closed square [0,1]^2, where the entropy
/// terms extend by continuity (needed e.g. at the delta = 1 edge).
double psi_weak(double delta, double rho);
double psi_strong(double delta, double rho);

/// Weak threshold max(0, 2 - 1/delta); identical for orthant and hypercube.
double rho_weak(double delta, Shape shape = Shape::Orthant);

/**
 * Strong threshold for the orthant: the smallest root of
 * psi_strong(delta, .) in [0, 1), located by a bracket scan with step
 * 1e-3 followed by bisection to absolute tolerance 1e-12.  Defined for
 * 1/2 <= delta <= 1; returns 0 at delta = 1/2.
 */
double rho_strong(double delta);

enum class ThresholdCurve { WeakHypercube };

/**
 * Area under a threshold curve over delta in (0,1), by composite Simpson
 * quadrature with at least `quad_points` panels (the weak hypercube curve
 * vanishes on (0, 1/2], and the quadrature integrates the smooth part).
 */
double curve_area(ThresholdCurve curve, int quad_points);

enum class Regime { LowerTail, Middle, UpperTail };

std::string to_string(Regime regime);

/// Classify (m, M) = (N-n, N-k) against the binomial bulk M/2 +- sqrt(M/4).
Regime regime_classify(const DimensionSpec& dims);

/// Serialize a rational as "p/q" (or "p" when the denominator is 1).
std::string rational_to_string(const Rational& value);

}  // namespace polyface

#endif  // POLYFACE_PROBCALC_HPP
