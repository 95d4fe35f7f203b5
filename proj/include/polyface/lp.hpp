#ifndef POLYFACE_LP_HPP
#define POLYFACE_LP_HPP

#include <Eigen/Dense>

namespace polyface {

enum class LPStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

std::string lp_status_name(LPStatus status);

/**
 * A dense linear program
 *
 *     maximize  objective . x
 *     s.t.      ineq_lhs x >= ineq_rhs
 *               eq_lhs x = eq_rhs
 *               lower <= x <= upper   (entries may be +-infinity)
 *
 * Equal lower and upper bounds pin a variable to a constant.
 */
struct LinearProgram {
    Eigen::VectorXd objective;
    Eigen::MatrixXd ineq_lhs;
    Eigen::VectorXd ineq_rhs;
    Eigen::MatrixXd eq_lhs;
    Eigen::VectorXd eq_rhs;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    /// An LP over `nvars` free variables with zero objective and no rows.
    static LinearProgram over_free_vars(int nvars);

    void validate() const;
};

struct LPSolution {
    LPStatus status = LPStatus::NumericalFailure;
    Eigen::VectorXd x;
    double objective_value = 0.0;
    int iterations = 0;
};

inline constexpr double kLpPivotTol = 1e-10;
inline constexpr double kLpFeasTol = 1e-9;
inline constexpr int kLpIterationCap = 100000;

/**
 * Two-phase dense primal simplex.  Pricing is Dantzig (most negative
 * reduced cost) with a switch to Bland's rule after 50*(rows+cols)
 * iterations; ratio-test ties break toward the smallest basic variable
 * index, so identical inputs produce identical pivot sequences.  Optimal
 * solutions are verified against the original rows and bounds to
 * kLpFeasTol * (1 + |rhs|_inf); a violation downgrades the status to
 * NumericalFailure, as does exceeding kLpIterationCap iterations.
 */
LPSolution solve(const LinearProgram& lp);

/// min 1'x  s.t.  Ax = b, x >= 0.  objective_value is the attained sum.
LPSolution min_l1_nonneg(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

struct BoxRange {
    LPStatus status = LPStatus::NumericalFailure;
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
};

/**
 * Range of coordinate j over the box-constrained affine slice
 * {x : Ax = b, 0 <= x <= 1}.  A maximal width of ~0 across all j
 * certifies that the slice is a single point.
 */
BoxRange box_range(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int j);

}  // namespace polyface

#endif  // POLYFACE_LP_HPP
