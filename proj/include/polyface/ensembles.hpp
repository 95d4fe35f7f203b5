#ifndef POLYFACE_ENSEMBLES_HPP
#define POLYFACE_ENSEMBLES_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>

#include "polyface/types.hpp"

namespace polyface {

/**
 * Matrix families with orthant-symmetric nullspaces, plus the two
 * deliberately mean-shifted constructions (partial Fourier rows and the
 * adjoined all-ones row) whose projected-orthant behavior is different.
 */
enum class EnsembleKind {
    GaussianIID,         // iid N(0,1) entries
    UniformIID,          // iid uniform on [-1,1]
    RademacherCensored,  // iid +-1, redrawn until in general position
    TernaryIID,          // iid uniform on {-1,0,1}
    Orthoprojector,      // orthonormal rows, Haar-distributed row span
    SignEnsemble,        // fixed generator with iid column sign flips
    PartialFourier,      // deterministic low-frequency trigonometric rows
    AdjoinOnes,          // all-ones row stacked on an inner draw
};

std::string to_string(EnsembleKind kind);
EnsembleKind ensemble_kind_from_string(const std::string& name);

/**
 * A named random (or deterministic) n x N matrix family with a seed.
 * SignEnsemble and AdjoinOnes carry an inner spec: the sign ensemble's
 * generator matrix is the inner spec's trial-0 draw, and AdjoinOnes
 * stacks an all-ones row on top of an inner draw with rows-1 rows.
 */
struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::GaussianIID;
    int rows = 0;
    int cols = 0;
    std::uint64_t seed = 0;
    std::shared_ptr<EnsembleSpec> inner;  // SignEnsemble / AdjoinOnes only

    /// Throws std::invalid_argument on malformed specs (rows >= cols,
    /// even PartialFourier rows, inner row-count mismatch, ...).
    void validate() const;

    /// Compact display name, e.g. "AdjoinOnes(GaussianIID)".
    std::string name() const;

    std::string to_json() const;
    static EnsembleSpec from_json(const std::string& text);

    static EnsembleSpec make(EnsembleKind kind, int rows, int cols, std::uint64_t seed);
    /// AdjoinOnes around an inner kind with rows-1 rows.
    static EnsembleSpec adjoin_ones_around(EnsembleKind inner_kind, int rows, int cols, std::uint64_t seed);
    /// SignEnsemble whose generator is the inner kind's trial-0 draw.
    static EnsembleSpec sign_flips_of(EnsembleKind inner_kind, int rows, int cols, std::uint64_t seed);
};

/**
 * Draw the trial_index-th realization of the ensemble.  The result is a
 * pure function of (spec, trial_index): trials may be sampled in any
 * order, in parallel, and across runs with identical output.
 *
 * RademacherCensored redraws (at most kCensoredRetryLimit times) until
 * the draw passes check_general_position; exceeding the limit throws,
 * which signals a degenerate spec rather than bad luck.
 */
Eigen::MatrixXd sample_matrix(const EnsembleSpec& spec, std::int64_t trial_index);

inline constexpr int kCensoredRetryLimit = 64;

/**
 * The n x N low-frequency trigonometric matrix (n odd):
 * row 1 is all ones, and rows 2j, 2j+1 hold sin and cos of the j-th
 * harmonic sampled at angles pi(j-1)i'/N.  Columns are points on the
 * trigonometric moment curve, so every n columns are independent.
 */
Eigen::MatrixXd build_partial_fourier(int n, int N);

/// Stack a row of ones on top of A.
Eigen::MatrixXd adjoin_ones(const Eigen::MatrixXd& A);

struct GeneralPositionCheck {
    bool in_general_position = false;
    bool exhaustive = false;          // false when the subset budget forced sampling
    std::int64_t subsets_checked = 0;

    explicit operator bool() const { return in_general_position; }
};

/**
 * Certify that every n x n column submatrix of the n x N matrix A is
 * nonsingular: each submatrix must have smallest singular value above
 * tol times the largest singular value of A.  When C(N,n) exceeds
 * `budget`, a fixed-seed random sample of subsets is tested instead and
 * the result is marked non-exhaustive.
 */
GeneralPositionCheck check_general_position(const Eigen::MatrixXd& A, double tol = 1e-10,
                                            std::int64_t budget = 20000);

/// CSV export, one row per line, 17 significant digits.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& M);

}  // namespace polyface

#endif  // POLYFACE_ENSEMBLES_HPP
