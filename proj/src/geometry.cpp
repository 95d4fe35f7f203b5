#include "polyface/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "polyface/ensembles.hpp"
#include "polyface/lp.hpp"
#include "polyface/rng.hpp"

namespace polyface {

NullBasis nullspace_basis(const Eigen::MatrixXd& A) {
    const int n = static_cast<int>(A.rows());
    const int N = static_cast<int>(A.cols());
    if (n >= N) throw std::invalid_argument("nullspace_basis needs a wide matrix");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A.transpose());
    qr.setThreshold(1e-10);
    if (qr.rank() < n) {
        throw std::runtime_error("nullspace_basis: matrix is row-rank deficient");
    }

    // The trailing N-n columns of Q are orthonormal and orthogonal to the
    // range of A', i.e. they span the nullspace of A.
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(N, N);
    NullBasis basis;
    basis.B = Q.rightCols(N - n).transpose();
    basis.rank_certified = true;
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    basis.residual = (A * basis.B.transpose()).cwiseAbs().maxCoeff() / scale;
    if (basis.residual > kNullBasisResidualTol) {
        throw std::runtime_error("nullspace_basis: residual above tolerance");
    }
    return basis;
}

MarginResult max_margin_direction(const std::vector<Eigen::VectorXd>& points,
                                  const std::vector<Eigen::VectorXd>& equalities) {
    if (points.empty()) throw std::invalid_argument("max_margin_direction needs at least one point");
    const int m = static_cast<int>(points.front().size());
    if (m < 1) throw std::invalid_argument("max_margin_direction needs dimension >= 1");

    // Variables (c, t): maximize t s.t. p.c - t >= 0, g.c = 0, c in the box.
    LinearProgram lp = LinearProgram::over_free_vars(m + 1);
    lp.objective(m) = 1.0;
    lp.ineq_lhs = Eigen::MatrixXd::Zero(points.size(), m + 1);
    lp.ineq_rhs = Eigen::VectorXd::Zero(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != m) throw std::invalid_argument("max_margin_direction: ragged points");
        lp.ineq_lhs.block(i, 0, 1, m) = points[i].transpose();
        lp.ineq_lhs(i, m) = -1.0;
    }
    if (!equalities.empty()) {
        lp.eq_lhs = Eigen::MatrixXd::Zero(equalities.size(), m + 1);
        lp.eq_rhs = Eigen::VectorXd::Zero(equalities.size());
        for (std::size_t i = 0; i < equalities.size(); ++i) {
            if (equalities[i].size() != m) throw std::invalid_argument("max_margin_direction: ragged equalities");
            lp.eq_lhs.block(i, 0, 1, m) = equalities[i].transpose();
        }
    }
    lp.lower.head(m).setConstant(-1.0);
    lp.upper.head(m).setConstant(1.0);

    // Maximize over the boundary of the sup-norm box, one facet at a time;
    // this keeps c away from 0, so a negative optimum is meaningful.
    MarginResult result;
    result.t_star = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) {
        for (const double s : {1.0, -1.0}) {
            lp.lower(j) = s;
            lp.upper(j) = s;
            const LPSolution sol = solve(lp);
            lp.lower(j) = -1.0;
            lp.upper(j) = 1.0;
            if (sol.status == LPStatus::Infeasible) continue;  // facet excluded by equalities
            if (sol.status != LPStatus::Optimal) {
                result.solver_ok = false;
                return result;
            }
            if (sol.objective_value > result.t_star) {
                result.t_star = sol.objective_value;
                result.direction = sol.x.head(m);
            }
        }
    }
    return result;
}

namespace {

std::vector<Eigen::VectorXd> constraint_points(const NullBasis& basis, const FaceSpec& face) {
    const int N = basis.ambient_dim();
    std::vector<Eigen::VectorXd> points;
    points.reserve(N - face.support.size());
    for (int i = 0; i < N; ++i) {
        if (std::binary_search(face.support.begin(), face.support.end(), i)) continue;
        Eigen::VectorXd beta = basis.B.col(i);
        if (std::binary_search(face.upper.begin(), face.upper.end(), i)) beta = -beta;
        points.push_back(std::move(beta));
    }
    return points;
}

}  // namespace

SurvivalVerdict face_survives(const NullBasis& basis, const FaceSpec& face, double tol) {
    face.validate(basis.ambient_dim());

    SurvivalVerdict verdict;
    if (face.shape == Shape::Orthant && face.support.empty()) {
        // The apex of the projected cone: always a vertex.
        verdict.status = Survival::Survives;
        verdict.margin = -1.0;
        return verdict;
    }

    std::vector<Eigen::VectorXd> equalities;
    if (face.shape == Shape::Simplex) {
        // Directions must stay in the simplex's affine hull: 1'B'c = 0.
        equalities.push_back(basis.B.rowwise().sum());
    }

    const MarginResult margin = max_margin_direction(constraint_points(basis, face), equalities);
    if (!margin.solver_ok) {
        verdict.status = Survival::Indeterminate;
        verdict.margin = 0.0;
        return verdict;
    }
    verdict.margin = margin.t_star;
    if (margin.t_star > tol) {
        verdict.status = Survival::Lost;
        verdict.witness = margin.direction;
    } else if (margin.t_star < -tol) {
        verdict.status = Survival::Survives;
    } else {
        verdict.status = Survival::Indeterminate;
    }
    return verdict;
}

FaceSpec lost_vertex(const NullBasis& basis) {
    const Eigen::VectorXd w = basis.B.row(0);
    if (w.cwiseAbs().maxCoeff() < 1e-300) {
        throw std::runtime_error("lost_vertex: null vector is numerically zero");
    }
    FaceSpec face;
    face.shape = Shape::Hypercube;
    for (int i = 0; i < w.size(); ++i) {
        if (w(i) <= 0.0) face.upper.push_back(i);  // ties pinned at 1
    }
    return face;
}

namespace {

std::int64_t binomial_or_throw(int N, int k, std::int64_t cap) {
    double v = 1.0;
    for (int i = 1; i <= k; ++i) {
        v *= static_cast<double>(N - k + i) / i;
        if (v > 2.0 * static_cast<double>(cap)) {
            throw std::invalid_argument("count_faces_exhaustive: face budget exceeded");
        }
    }
    return static_cast<std::int64_t>(std::llround(v));
}

}  // namespace

FaceCount count_faces_exhaustive(const NullBasis& basis, Shape shape, int k, double tol) {
    const int N = basis.ambient_dim();
    if (k < 0 || k > N) throw std::invalid_argument("count_faces_exhaustive: bad face dimension");
    if (shape == Shape::Simplex && k < 1) {
        throw std::invalid_argument("count_faces_exhaustive: simplex faces need support size >= 1");
    }

    const std::int64_t supports = binomial_or_throw(N, k, kFaceEnumerationBudget);
    std::int64_t total = supports;
    if (shape == Shape::Hypercube) {
        const int free_bits = N - k;
        if (free_bits >= 62 || supports > (kFaceEnumerationBudget >> free_bits)) {
            throw std::invalid_argument("count_faces_exhaustive: face budget exceeded");
        }
        total = supports << free_bits;
    }
    if (total > kFaceEnumerationBudget) {
        throw std::invalid_argument("count_faces_exhaustive: face budget exceeded");
    }

    FaceCount count;
    count.total = total;

    FaceSpec face;
    face.shape = shape;
    face.support.resize(k);
    std::iota(face.support.begin(), face.support.end(), 0);

    std::vector<int> complement;
    bool more = true;
    while (more) {
        if (shape == Shape::Hypercube) {
            complement.clear();
            for (int i = 0, s = 0; i < N; ++i) {
                if (s < k && face.support[s] == i) {
                    ++s;
                } else {
                    complement.push_back(i);
                }
            }
            const std::uint64_t masks = 1ULL << complement.size();
            for (std::uint64_t mask = 0; mask < masks; ++mask) {
                face.upper.clear();
                for (std::size_t b = 0; b < complement.size(); ++b) {
                    if (mask & (1ULL << b)) face.upper.push_back(complement[b]);
                }
                const SurvivalVerdict v = face_survives(basis, face, tol);
                if (v.status == Survival::Survives) ++count.survived;
                if (v.status == Survival::Indeterminate) ++count.indeterminate;
            }
        } else {
            const SurvivalVerdict v = face_survives(basis, face, tol);
            if (v.status == Survival::Survives) ++count.survived;
            if (v.status == Survival::Indeterminate) ++count.indeterminate;
        }

        // next k-subset of {0..N-1}
        if (k == 0) break;
        int i = k - 1;
        while (i >= 0 && face.support[i] == N - k + i) --i;
        if (i < 0) {
            more = false;
        } else {
            ++face.support[i];
            for (int j = i + 1; j < k; ++j) face.support[j] = face.support[j - 1] + 1;
        }
    }
    return count;
}

bool highpass_negativity_check(int n, int N, int samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("highpass_negativity_check needs samples >= 1");
    const Eigen::MatrixXd W = build_partial_fourier(n, N);
    const NullBasis basis = nullspace_basis(W);
    const int required = (n - 1) / 2;
    for (int s = 0; s < samples; ++s) {
        TrialRng rng(seed, static_cast<std::uint64_t>(s), RngDomain::Highpass);
        Eigen::VectorXd c(basis.nullity());
        for (int i = 0; i < c.size(); ++i) c(i) = rng.gaussian();
        const Eigen::VectorXd w = basis.B.transpose() * c;
        int negatives = 0;
        for (int i = 0; i < w.size(); ++i) {
            if (w(i) < -1e-12) ++negatives;  // near-zero entries count as nonnegative
        }
        if (negatives < required) return false;
    }
    return true;
}

}  // namespace polyface
