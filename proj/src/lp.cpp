#include "polyface/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace polyface {

std::string lp_status_name(LPStatus status) {
    switch (status) {
        case LPStatus::Optimal: return "Optimal";
        case LPStatus::Infeasible: return "Infeasible";
        case LPStatus::Unbounded: return "Unbounded";
        case LPStatus::NumericalFailure: return "NumericalFailure";
    }
    throw std::invalid_argument("unknown LP status");
}

LinearProgram LinearProgram::over_free_vars(int nvars) {
    LinearProgram lp;
    const double inf = std::numeric_limits<double>::infinity();
    lp.objective = Eigen::VectorXd::Zero(nvars);
    lp.ineq_lhs.resize(0, nvars);
    lp.ineq_rhs.resize(0);
    lp.eq_lhs.resize(0, nvars);
    lp.eq_rhs.resize(0);
    lp.lower = Eigen::VectorXd::Constant(nvars, -inf);
    lp.upper = Eigen::VectorXd::Constant(nvars, inf);
    return lp;
}

void LinearProgram::validate() const {
    const auto n = objective.size();
    if (lower.size() != n || upper.size() != n) throw std::invalid_argument("LP bound size mismatch");
    if (ineq_lhs.rows() != ineq_rhs.size() || (ineq_lhs.rows() > 0 && ineq_lhs.cols() != n)) {
        throw std::invalid_argument("LP inequality block size mismatch");
    }
    if (eq_lhs.rows() != eq_rhs.size() || (eq_lhs.rows() > 0 && eq_lhs.cols() != n)) {
        throw std::invalid_argument("LP equality block size mismatch");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        if (lower(j) > upper(j)) throw std::invalid_argument("LP has lower bound above upper bound");
        if (std::isnan(lower(j)) || std::isnan(upper(j)) || !std::isfinite(objective(j))) {
            throw std::invalid_argument("LP has NaN bounds or non-finite objective");
        }
    }
    if (n + ineq_lhs.rows() + eq_lhs.rows() > 5000) {
        throw std::invalid_argument("LP exceeds the supported desk scale");
    }
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// x[j] is reconstructed from the standard-form variables y >= 0 as
//   Pinned:   x = offset
//   Shifted:  x = offset + y[col]
//   Mirrored: x = offset - y[col]
//   Free:     x = y[col] - y[col_neg]
struct VarMap {
    enum Kind { Pinned, Shifted, Mirrored, Free } kind = Pinned;
    int col = -1;
    int col_neg = -1;
    double offset = 0.0;
};

struct Tableau {
    Eigen::MatrixXd T;  // rows x (cols + 1); last column is the rhs
    std::vector<int> basis;
    int rows = 0;
    int cols = 0;  // structural + slack + artificial
    int art_start = 0;

    double& rhs(int i) { return T(i, cols); }
};

class SimplexSolver {
  public:
    explicit SimplexSolver(const LinearProgram& lp) : lp_(lp) {}

    LPSolution run() {
        lp_.validate();
        build_varmap();
        build_rows();
        build_tableau();

        LPSolution sol;
        sol.x = Eigen::VectorXd::Zero(lp_.objective.size());

        if (!phase_one(sol)) return sol;  // infeasible or numerical failure
        if (!phase_two(sol)) return sol;  // unbounded or numerical failure

        extract(sol);
        verify(sol);
        return sol;
    }

  private:
    LinearProgram lp_;
    std::vector<VarMap> vmap_;
    int ny_ = 0;

    // standard-form rows: coeffs over y, a row type, and a rhs
    enum class RowType { GE, EQ, UPPER };
    Eigen::MatrixXd rowA_;
    Eigen::VectorXd rowb_;
    std::vector<RowType> rowtype_;

    Tableau tab_;
    Eigen::RowVectorXd cost_;  // reduced-cost row, cols + 1 entries
    int iterations_ = 0;
    int bland_after_ = 0;
    double feas_scale_ = 1.0;

    void build_varmap() {
        const int n = static_cast<int>(lp_.objective.size());
        vmap_.resize(n);
        ny_ = 0;
        for (int j = 0; j < n; ++j) {
            const double lo = lp_.lower(j), hi = lp_.upper(j);
            VarMap& v = vmap_[j];
            if (lo == hi) {
                v.kind = VarMap::Pinned;
                v.offset = lo;
            } else if (lo > -kInf) {
                v.kind = VarMap::Shifted;
                v.offset = lo;
                v.col = ny_++;
            } else if (hi < kInf) {
                v.kind = VarMap::Mirrored;
                v.offset = hi;
                v.col = ny_++;
            } else {
                v.kind = VarMap::Free;
                v.col = ny_++;
                v.col_neg = ny_++;
            }
        }
    }

    void add_row_from(const Eigen::RowVectorXd& coeffs, double rhs, RowType type, int r) {
        double b = rhs;
        for (int j = 0; j < coeffs.size(); ++j) {
            const double g = coeffs(j);
            if (g == 0.0) continue;
            const VarMap& v = vmap_[j];
            switch (v.kind) {
                case VarMap::Pinned: b -= g * v.offset; break;
                case VarMap::Shifted:
                    rowA_(r, v.col) += g;
                    b -= g * v.offset;
                    break;
                case VarMap::Mirrored:
                    rowA_(r, v.col) -= g;
                    b -= g * v.offset;
                    break;
                case VarMap::Free:
                    rowA_(r, v.col) += g;
                    rowA_(r, v.col_neg) -= g;
                    break;
            }
        }
        rowb_(r) = b;
        rowtype_[r] = type;
    }

    void build_rows() {
        const int n_ineq = static_cast<int>(lp_.ineq_lhs.rows());
        const int n_eq = static_cast<int>(lp_.eq_lhs.rows());
        int n_upper = 0;
        for (int j = 0; j < static_cast<int>(vmap_.size()); ++j) {
            if (vmap_[j].kind == VarMap::Shifted && lp_.upper(j) < kInf) ++n_upper;
        }

        const int m = n_ineq + n_eq + n_upper;
        rowA_ = Eigen::MatrixXd::Zero(m, ny_);
        rowb_ = Eigen::VectorXd::Zero(m);
        rowtype_.assign(m, RowType::EQ);

        int r = 0;
        for (int i = 0; i < n_ineq; ++i, ++r) add_row_from(lp_.ineq_lhs.row(i), lp_.ineq_rhs(i), RowType::GE, r);
        for (int i = 0; i < n_eq; ++i, ++r) add_row_from(lp_.eq_lhs.row(i), lp_.eq_rhs(i), RowType::EQ, r);
        for (int j = 0; j < static_cast<int>(vmap_.size()); ++j) {
            if (vmap_[j].kind == VarMap::Shifted && lp_.upper(j) < kInf) {
                rowA_(r, vmap_[j].col) = 1.0;
                rowb_(r) = lp_.upper(j) - lp_.lower(j);
                rowtype_[r] = RowType::UPPER;
                ++r;
            }
        }

        feas_scale_ = 1.0;
        if (lp_.ineq_rhs.size() > 0) feas_scale_ += lp_.ineq_rhs.cwiseAbs().maxCoeff();
        if (lp_.eq_rhs.size() > 0) feas_scale_ += lp_.eq_rhs.cwiseAbs().maxCoeff();
    }

    void build_tableau() {
        const int m = static_cast<int>(rowA_.rows());
        // slack layout: one surplus/slack column per GE/UPPER row
        std::vector<int> slack_col(m, -1);
        int n_slack = 0;
        for (int i = 0; i < m; ++i) {
            if (rowtype_[i] != RowType::EQ) slack_col[i] = ny_ + n_slack++;
        }

        // sign conventions before normalization: GE rows carry -1 surplus,
        // UPPER rows +1 slack
        std::vector<double> slack_sign(m, 0.0);
        std::vector<double> rowscale(m, 1.0);
        for (int i = 0; i < m; ++i) {
            slack_sign[i] = (rowtype_[i] == RowType::GE) ? -1.0 : (rowtype_[i] == RowType::UPPER ? 1.0 : 0.0);
            if (rowb_(i) < 0.0) rowscale[i] = -1.0;
            // a homogeneous GE row can host its surplus as the basic variable
            // once flipped to +1
            if (rowb_(i) == 0.0 && slack_sign[i] * rowscale[i] < 0.0) rowscale[i] = -rowscale[i];
        }

        // artificials for rows whose slack cannot start basic
        std::vector<int> art_col(m, -1);
        int n_art = 0;
        tab_.art_start = ny_ + n_slack;
        for (int i = 0; i < m; ++i) {
            const double s = slack_sign[i] * rowscale[i];
            if (s != 1.0) art_col[i] = tab_.art_start + n_art++;
        }

        tab_.rows = m;
        tab_.cols = ny_ + n_slack + n_art;
        tab_.T = Eigen::MatrixXd::Zero(m, tab_.cols + 1);
        tab_.basis.assign(m, -1);
        for (int i = 0; i < m; ++i) {
            tab_.T.block(i, 0, 1, ny_) = rowscale[i] * rowA_.row(i);
            if (slack_col[i] >= 0) tab_.T(i, slack_col[i]) = slack_sign[i] * rowscale[i];
            tab_.T(i, tab_.cols) = rowscale[i] * rowb_(i);
            if (art_col[i] >= 0) {
                tab_.T(i, art_col[i]) = 1.0;
                tab_.basis[i] = art_col[i];
            } else {
                tab_.basis[i] = slack_col[i];
            }
        }

        bland_after_ = 50 * (tab_.rows + tab_.cols);
    }

    void eliminate_cost_row() {
        for (int i = 0; i < tab_.rows; ++i) {
            const double c = cost_(tab_.basis[i]);
            if (c != 0.0) cost_ -= c * tab_.T.row(i);
        }
    }

    void pivot(int row, int col) {
        tab_.T.row(row) /= tab_.T(row, col);
        Eigen::VectorXd column = tab_.T.col(col);
        column(row) = 0.0;
        tab_.T.noalias() -= column * tab_.T.row(row);
        cost_ -= cost_(col) * tab_.T.row(row);
        tab_.T.col(col).setZero();
        tab_.T(row, col) = 1.0;
        cost_(col) = 0.0;
        tab_.basis[row] = col;
        ++iterations_;
    }

    /// Core minimization loop over the current cost row.  Returns Optimal,
    /// Unbounded, or NumericalFailure (iteration cap).
    LPStatus iterate() {
        while (true) {
            const bool bland = iterations_ >= bland_after_;
            int enter = -1;
            double best = -kLpPivotTol;
            for (int j = 0; j < tab_.art_start; ++j) {  // artificials never re-enter
                const double c = cost_(j);
                if (c < best) {
                    enter = j;
                    if (bland) break;
                    best = c;
                }
            }
            if (enter < 0) return LPStatus::Optimal;

            int leave = -1;
            double best_ratio = kInf;
            for (int i = 0; i < tab_.rows; ++i) {
                const double a = tab_.T(i, enter);
                if (a > kLpPivotTol) {
                    const double ratio = tab_.T(i, tab_.cols) / a;
                    if (ratio < best_ratio - 1e-14 ||
                        (ratio < best_ratio + 1e-14 && (leave < 0 || tab_.basis[i] < tab_.basis[leave]))) {
                        best_ratio = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) return LPStatus::Unbounded;
            pivot(leave, enter);
            if (iterations_ > kLpIterationCap) return LPStatus::NumericalFailure;
        }
    }

    bool phase_one(LPSolution& sol) {
        const bool any_art = tab_.cols > tab_.art_start;
        if (any_art) {
            cost_ = Eigen::RowVectorXd::Zero(tab_.cols + 1);
            for (int j = tab_.art_start; j < tab_.cols; ++j) cost_(j) = 1.0;
            eliminate_cost_row();
            const LPStatus st = iterate();
            if (st == LPStatus::NumericalFailure || st == LPStatus::Unbounded) {
                sol.status = LPStatus::NumericalFailure;
                sol.iterations = iterations_;
                return false;
            }
            double art_value = 0.0;
            for (int i = 0; i < tab_.rows; ++i) {
                if (tab_.basis[i] >= tab_.art_start) art_value += tab_.T(i, tab_.cols);
            }
            if (art_value > kLpFeasTol * feas_scale_) {
                sol.status = LPStatus::Infeasible;
                sol.iterations = iterations_;
                return false;
            }
            // pivot zero-level artificials out where a nonzero structural
            // or slack coefficient exists; rows with none are redundant
            for (int i = 0; i < tab_.rows; ++i) {
                if (tab_.basis[i] < tab_.art_start) continue;
                for (int j = 0; j < tab_.art_start; ++j) {
                    if (std::abs(tab_.T(i, j)) > kLpPivotTol) {
                        pivot(i, j);
                        break;
                    }
                }
            }
        }
        return true;
    }

    bool phase_two(LPSolution& sol) {
        cost_ = Eigen::RowVectorXd::Zero(tab_.cols + 1);
        for (int j = 0; j < static_cast<int>(vmap_.size()); ++j) {
            const VarMap& v = vmap_[j];
            const double c = lp_.objective(j);  // maximize c.x == minimize -c.x
            switch (v.kind) {
                case VarMap::Pinned: break;
                case VarMap::Shifted: cost_(v.col) += -c; break;
                case VarMap::Mirrored: cost_(v.col) += c; break;
                case VarMap::Free:
                    cost_(v.col) += -c;
                    cost_(v.col_neg) += c;
                    break;
            }
        }
        eliminate_cost_row();
        const LPStatus st = iterate();
        if (st != LPStatus::Optimal) {
            sol.status = st;
            sol.iterations = iterations_;
            return false;
        }
        return true;
    }

    void extract(LPSolution& sol) {
        Eigen::VectorXd y = Eigen::VectorXd::Zero(ny_);
        for (int i = 0; i < tab_.rows; ++i) {
            if (tab_.basis[i] < ny_) y(tab_.basis[i]) = tab_.T(i, tab_.cols);
        }
        Eigen::VectorXd x(lp_.objective.size());
        for (int j = 0; j < static_cast<int>(vmap_.size()); ++j) {
            const VarMap& v = vmap_[j];
            switch (v.kind) {
                case VarMap::Pinned: x(j) = v.offset; break;
                case VarMap::Shifted: x(j) = v.offset + y(v.col); break;
                case VarMap::Mirrored: x(j) = v.offset - y(v.col); break;
                case VarMap::Free: x(j) = y(v.col) - y(v.col_neg); break;
            }
        }
        sol.x = x;
        sol.objective_value = lp_.objective.dot(x);
        sol.iterations = iterations_;
        sol.status = LPStatus::Optimal;
    }

    void verify(LPSolution& sol) {
        const double tol = kLpFeasTol * feas_scale_;
        double violation = 0.0;
        if (lp_.ineq_lhs.rows() > 0) {
            violation = std::max(violation, (lp_.ineq_rhs - lp_.ineq_lhs * sol.x).maxCoeff());
        }
        if (lp_.eq_lhs.rows() > 0) {
            violation = std::max(violation, (lp_.eq_lhs * sol.x - lp_.eq_rhs).cwiseAbs().maxCoeff());
        }
        for (Eigen::Index j = 0; j < sol.x.size(); ++j) {
            if (lp_.lower(j) > -kInf) violation = std::max(violation, lp_.lower(j) - sol.x(j));
            if (lp_.upper(j) < kInf) violation = std::max(violation, sol.x(j) - lp_.upper(j));
        }
        if (violation > tol) sol.status = LPStatus::NumericalFailure;
    }
};

}  // namespace

LPSolution solve(const LinearProgram& lp) { return SimplexSolver(lp).run(); }

LPSolution min_l1_nonneg(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    const int N = static_cast<int>(A.cols());
    LinearProgram lp = LinearProgram::over_free_vars(N);
    lp.objective = Eigen::VectorXd::Constant(N, -1.0);  // maximize -1'x
    lp.eq_lhs = A;
    lp.eq_rhs = b;
    lp.lower = Eigen::VectorXd::Zero(N);
    LPSolution sol = solve(lp);
    if (sol.status == LPStatus::Optimal) sol.objective_value = sol.x.sum();
    return sol;
}

BoxRange box_range(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int j) {
    const int N = static_cast<int>(A.cols());
    if (j < 0 || j >= N) throw std::invalid_argument("box_range: coordinate out of range");
    LinearProgram lp = LinearProgram::over_free_vars(N);
    lp.eq_lhs = A;
    lp.eq_rhs = b;
    lp.lower = Eigen::VectorXd::Zero(N);
    lp.upper = Eigen::VectorXd::Ones(N);

    BoxRange range;
    lp.objective(j) = 1.0;
    const LPSolution up = solve(lp);
    if (up.status != LPStatus::Optimal) {
        range.status = up.status;
        return range;
    }
    lp.objective(j) = -1.0;
    const LPSolution down = solve(lp);
    if (down.status != LPStatus::Optimal) {
        range.status = down.status;
        return range;
    }
    range.status = LPStatus::Optimal;
    range.hi = up.objective_value;
    range.lo = -down.objective_value;
    return range;
}

}  // namespace polyface
