#ifndef POLYFACE_GEOMETRY_HPP
#define POLYFACE_GEOMETRY_HPP

#include <cstdint>
#include <vector>

#include "polyface/types.hpp"

namespace polyface {

/**
 * An orthonormal-row basis B of the nullspace of an n x N matrix A:
 * B is (N-n) x N with A B' = 0.  Its columns beta_1..beta_N are the
 * points fed to the halfspace test; the face-survival question for a
 * support S is whether any nonzero combination B'c is nonnegative on
 * the complement of S.
 */
struct NullBasis {
    Eigen::MatrixXd B;            // (N-n) x N, orthonormal rows
    double residual = 0.0;        // max |A B'| / max(1, max |A|)
    bool rank_certified = false;  // A had full row rank at the QR threshold

    int ambient_dim() const { return static_cast<int>(B.cols()); }
    int nullity() const { return static_cast<int>(B.rows()); }
};

/// Residual bound certified by nullspace_basis.
inline constexpr double kNullBasisResidualTol = 1e-9;

/// Default margin tolerance separating Survives/Lost from Indeterminate.
inline constexpr double kMarginTol = 1e-8;

/**
 * Orthonormal nullspace basis via column-pivoted QR of A'.  Throws
 * std::runtime_error when A is row-rank-deficient at relative threshold
 * 1e-10 (a degenerate ensemble draw; callers may resample).
 */
NullBasis nullspace_basis(const Eigen::MatrixXd& A);

struct MarginResult {
    double t_star = 0.0;
    Eigen::VectorXd direction;  // optimizer c, empty when no nonzero direction exists
    bool solver_ok = true;      // false on LP numerical failure
};

/**
 * Best worst-case margin of a direction against a point set:
 *
 *     t* = max { min_i beta_i . c  :  g . c = 0 for g in equalities,
 *                                     |c|_inf = 1 }.
 *
 * t* > 0 certifies an open halfspace containing every point (c is a
 * witness); t* < 0 certifies that no nonzero c keeps all products
 * nonnegative.  The maximization over the unit sup-norm sphere is solved
 * exactly as 2m linear programs, one per fixed face of the box |c|_inf <= 1.
 * When the equalities exclude the entire sphere, t* is -infinity.
 */
MarginResult max_margin_direction(const std::vector<Eigen::VectorXd>& points,
                                  const std::vector<Eigen::VectorXd>& equalities = {});

/**
 * Face-survival oracle.  The constraint points are the columns of B off
 * the support (negated on the hypercube's upper set, which reduces the
 * pinned-at-1 coordinates to the orthant case); simplex faces add the
 * equality 1'B'c = 0 restricting directions to the simplex's affine
 * hull.  Verdict: Lost when t* > tol, Survives when t* < -tol, else
 * Indeterminate.  The orthant's 0-face (the apex) always survives.
 */
SurvivalVerdict face_survives(const NullBasis& basis, const FaceSpec& face, double tol = kMarginTol);

/**
 * A hypercube vertex guaranteed interior to the projected zonotope:
 * take w = first row of B and pin coordinate i at 1 when w(i) <= 0,
 * at 0 otherwise; then w itself is a feasible escape direction.
 */
FaceSpec lost_vertex(const NullBasis& basis);

struct FaceCount {
    std::int64_t survived = 0;
    std::int64_t total = 0;
    std::int64_t indeterminate = 0;
};

/// Largest number of faces count_faces_exhaustive will enumerate.
inline constexpr std::int64_t kFaceEnumerationBudget = 1000000;

/**
 * Enumerate every k-face of the generator (C(N,k) supports for the
 * orthant, times 2^{N-k} pinnings for the hypercube; support size k for
 * the (k-1)-faces of the simplex) and tally the survival verdicts.
 * Throws when the face count exceeds kFaceEnumerationBudget.
 */
FaceCount count_faces_exhaustive(const NullBasis& basis, Shape shape, int k, double tol = kMarginTol);

/**
 * Spot-check that random nullspace vectors of the n x N partial Fourier
 * matrix have at least (n-1)/2 negative entries.  Entries within 1e-12
 * of zero count as nonnegative.  Draws are keyed by (seed, sample index).
 */
bool highpass_negativity_check(int n, int N, int samples, std::uint64_t seed = 0x5EED);

}  // namespace polyface

#endif  // POLYFACE_GEOMETRY_HPP
