#ifndef POLYFACE_EXPERIMENTS_HPP
#define POLYFACE_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "polyface/ensembles.hpp"
#include "polyface/geometry.hpp"
#include "polyface/probcalc.hpp"
#include "polyface/types.hpp"

namespace polyface {

/// How hypercube trials choose the pinned-at-1 coordinates.
enum class HypercubePinning {
    RandomUpper,  // uniform over subsets of the complement, fresh per trial
    EmptyUpper,   // every complement coordinate pinned at 0
};

struct RunOptions {
    double tol = kMarginTol;
    int threads = 0;  // 0 = resolve from POLYFACE_THREADS, default 1
    HypercubePinning pinning = HypercubePinning::RandomUpper;
};

/**
 * Tally of a Monte Carlo face-survival run against the exact prediction.
 * `empirical` and `stderr_` are computed over conclusive trials only
 * (indeterminates are reported, never folded into either side).
 */
struct TrialReport {
    DimensionSpec dims;
    Shape shape = Shape::Orthant;
    EnsembleSpec ensemble;
    std::int64_t trials = 0;
    std::int64_t survived = 0;
    std::int64_t lost = 0;
    std::int64_t indeterminate = 0;
    std::int64_t degenerate = 0;  // draws rejected for rank deficiency (subset of indeterminate)
    Rational predicted;
    double empirical = 0.0;
    double stderr_ = 0.0;
};

/**
 * Estimate the k-face survival probability of the projected orthant or
 * hypercube: each trial draws A, builds a nullspace basis, and tests the
 * fixed face supported on the first k coordinates (exchangeability makes
 * any fixed support representative).  Hypercube pinnings follow
 * opts.pinning.  Matrix draws are keyed by ensemble.seed and pinning
 * draws by `seed`; the run aborts when the degenerate-draw rate exceeds
 * 1% or the indeterminate rate exceeds 0.1%.
 */
TrialReport mc_face_ratio(const DimensionSpec& dims, Shape shape, const EnsembleSpec& ensemble,
                          std::int64_t trials, std::uint64_t seed, const RunOptions& opts = {});

/// mc_face_ratio once per ensemble at common dims/trials.
std::vector<TrialReport> universality_sweep(const DimensionSpec& dims, Shape shape,
                                            const std::vector<EnsembleSpec>& ensembles,
                                            std::int64_t trials, std::uint64_t seed,
                                            const RunOptions& opts = {});

struct PhaseCell {
    double delta = 0.0;
    double rho = 0.0;
    DimensionSpec dims;
    double predicted = 0.0;
    double empirical = 0.0;  // NaN when only the exact formula applies (k = 0 or k = n)
    double stderr_ = 0.0;    // NaN likewise
    std::int64_t indeterminate = 0;
    bool mc_run = false;
};

struct PhaseTable {
    int N = 0;
    int grid = 0;
    Shape shape = Shape::Orthant;
    std::vector<PhaseCell> cells;  // row-major over (delta, rho)
};

struct PhaseDiagramParams {
    int N = 0;
    int grid = 0;
    std::int64_t trials = 0;
    Shape shape = Shape::Orthant;
    EnsembleKind kind = EnsembleKind::GaussianIID;
    std::uint64_t seed = 0;
};

/**
 * Predicted and empirical survival ratios on a grid x grid lattice of
 * (delta, rho) over (0,1)^2 with n = round(delta N), k = round(rho n).
 * Cells with k = 0 or k = n carry the exact prediction only and are
 * flagged by NaN empirical columns.
 */
PhaseTable phase_diagram(const PhaseDiagramParams& params, const RunOptions& opts = {});

struct FourierFaceLine {
    int k = 0;
    FaceCount count;
    std::vector<std::vector<int>> failed_supports;  // capped at 20 entries
};

struct FourierReport {
    int n = 0;
    int N = 0;
    int neighborliness_bound = 0;  // (n-1)/2
    std::vector<FourierFaceLine> lines;
    bool all_survive_below_bound = false;
    bool zero_indeterminate_below_bound = false;
};

/**
 * Exhaustive face counts of the projected orthant under the partial
 * Fourier matrix for k = 0 .. k_max (default (n-1)/2; pass a larger
 * k_max to probe past the guaranteed range).
 */
FourierReport fourier_neighborliness(int n, int N, double tol = kMarginTol, int k_max = -1);

struct BijectionTrial {
    std::int64_t trial = 0;
    bool conclusive = false;  // no indeterminate faces on either side
    bool counts_equal = false;
    std::vector<std::int64_t> orthant_counts;  // f_k(adjoined), k = 1..n-1
    std::vector<std::int64_t> simplex_counts;  // f_{k-1}(inner), same index
};

struct BijectionReport {
    int n = 0;
    int N = 0;
    std::int64_t trials = 0;
    std::int64_t conclusive = 0;
    std::int64_t equal = 0;
    std::vector<BijectionTrial> per_trial;

    bool equality_in_all_conclusive() const { return conclusive == equal; }
};

/**
 * Check, by exhaustive enumeration over Gaussian draws A ((n-1) x N),
 * that the projected orthant of [ones; A] has exactly as many k-faces as
 * the projected simplex of A has (k-1)-faces, for every 0 < k < n.
 */
BijectionReport adjoin_ones_bijection(int N, int n, std::int64_t trials, std::uint64_t seed,
                                      const RunOptions& opts = {});

enum class RecoveryKind { KSparseNonneg, KSimpleBox };

std::string to_string(RecoveryKind kind);

/**
 * Planted-instance recovery experiment.  Each trial plants x0 (k random
 * coordinates uniform in (0,1); the box kind pins the rest at fair-coin
 * 0/1 values), forms b = A x0, certifies uniqueness through the survival
 * oracle, and independently attempts recovery: nonnegative l1
 * minimization for the sparse kind, per-coordinate box ranges for the
 * box kind.  A certified-unique trial whose recovery fails is counted in
 * certified_but_failed; the equivalence of the two routes makes any such
 * count a defect.
 */
struct RecoveryReport {
    DimensionSpec dims;
    EnsembleSpec ensemble;
    RecoveryKind kind = RecoveryKind::KSparseNonneg;
    std::int64_t trials = 0;
    std::int64_t successes = 0;
    std::int64_t uniqueness_certified = 0;
    std::int64_t lp_failures = 0;
    std::int64_t certified_but_failed = 0;
};

inline constexpr double kRecoveryTol = 1e-6;

RecoveryReport recovery_trial(const DimensionSpec& dims, const EnsembleSpec& ensemble,
                              RecoveryKind kind, std::int64_t trials, std::uint64_t seed,
                              const RunOptions& opts = {});

// --- CSV serialization (UTF-8, header row, deterministic row order) ---
// `comments` lines are emitted first, each prefixed with "# ".

std::string trial_reports_to_csv(const std::vector<TrialReport>& reports,
                                 const std::vector<std::string>& comments = {});
std::string phase_table_to_csv(const PhaseTable& table, const std::vector<std::string>& comments = {});
std::string recovery_reports_to_csv(const std::vector<RecoveryReport>& reports,
                                    const std::vector<std::string>& comments = {});

/// 17-significant-digit decimal rendering used by every CSV column.
std::string format_double(double value);

}  // namespace polyface

#endif  // POLYFACE_EXPERIMENTS_HPP
