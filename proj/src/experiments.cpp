#include "polyface/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "polyface/lp.hpp"
#include "polyface/parallel.hpp"
#include "polyface/rng.hpp"

namespace polyface {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string to_string(RecoveryKind kind) {
    return kind == RecoveryKind::KSparseNonneg ? "KSparseNonneg" : "KSimpleBox";
}

namespace {

enum class TrialOutcome : std::uint8_t { Survived, Lost, Indeterminate, Degenerate };

FaceSpec leading_face(const DimensionSpec& dims, Shape shape) {
    FaceSpec face;
    face.shape = shape;
    face.support.resize(dims.k);
    std::iota(face.support.begin(), face.support.end(), 0);
    return face;
}

void finalize_tallies(TrialReport& report, const std::vector<TrialOutcome>& outcomes) {
    for (const TrialOutcome o : outcomes) {
        switch (o) {
            case TrialOutcome::Survived: ++report.survived; break;
            case TrialOutcome::Lost: ++report.lost; break;
            case TrialOutcome::Indeterminate: ++report.indeterminate; break;
            case TrialOutcome::Degenerate:
                ++report.indeterminate;
                ++report.degenerate;
                break;
        }
    }
    const std::int64_t conclusive = report.survived + report.lost;
    if (conclusive > 0) {
        report.empirical = static_cast<double>(report.survived) / static_cast<double>(conclusive);
        report.stderr_ = std::sqrt(report.empirical * (1.0 - report.empirical) /
                                   static_cast<double>(conclusive));
    } else {
        report.empirical = std::numeric_limits<double>::quiet_NaN();
        report.stderr_ = std::numeric_limits<double>::quiet_NaN();
    }
}

void enforce_rates(const TrialReport& report) {
    if (100 * report.degenerate > report.trials) {
        throw std::runtime_error("mc_face_ratio: degenerate-draw rate above 1% for ensemble " +
                                 report.ensemble.name() + " (" + std::to_string(report.degenerate) +
                                 "/" + std::to_string(report.trials) + ")");
    }
    const std::int64_t ties = report.indeterminate - report.degenerate;
    if (1000 * ties > report.trials) {
        throw std::runtime_error("mc_face_ratio: indeterminate rate above 0.1% (" +
                                 std::to_string(ties) + "/" + std::to_string(report.trials) +
                                 "); margin tolerance is suspect");
    }
}

}  // namespace

TrialReport mc_face_ratio(const DimensionSpec& dims, Shape shape, const EnsembleSpec& ensemble,
                          std::int64_t trials, std::uint64_t seed, const RunOptions& opts) {
    dims.validate();
    ensemble.validate();
    if (trials < 1) throw std::invalid_argument("mc_face_ratio needs at least one trial");
    if (shape == Shape::Simplex) {
        throw std::invalid_argument("mc_face_ratio covers the orthant and hypercube");
    }
    if (ensemble.rows != dims.n || ensemble.cols != dims.N) {
        throw std::invalid_argument("ensemble dimensions disagree with the dimension spec");
    }

    TrialReport report;
    report.dims = dims;
    report.shape = shape;
    report.ensemble = ensemble;
    report.trials = trials;
    report.predicted = expected_face_ratio(dims, shape);

    std::vector<TrialOutcome> outcomes(trials, TrialOutcome::Indeterminate);
    parallel_for(trials, resolve_thread_count(opts.threads), [&](std::int64_t t) {
        Eigen::MatrixXd A;
        NullBasis basis;
        try {
            A = sample_matrix(ensemble, t);
            basis = nullspace_basis(A);
        } catch (const std::runtime_error&) {
            outcomes[t] = TrialOutcome::Degenerate;
            return;
        }
        FaceSpec face = leading_face(dims, shape);
        if (shape == Shape::Hypercube && opts.pinning == HypercubePinning::RandomUpper) {
            TrialRng rng(seed, static_cast<std::uint64_t>(t), RngDomain::Face);
            for (int i = dims.k; i < dims.N; ++i) {
                if (rng.coin()) face.upper.push_back(i);
            }
        }
        const SurvivalVerdict verdict = face_survives(basis, face, opts.tol);
        outcomes[t] = verdict.status == Survival::Survives ? TrialOutcome::Survived
                      : verdict.status == Survival::Lost   ? TrialOutcome::Lost
                                                           : TrialOutcome::Indeterminate;
    });

    finalize_tallies(report, outcomes);
    enforce_rates(report);
    return report;
}

std::vector<TrialReport> universality_sweep(const DimensionSpec& dims, Shape shape,
                                            const std::vector<EnsembleSpec>& ensembles,
                                            std::int64_t trials, std::uint64_t seed,
                                            const RunOptions& opts) {
    std::vector<TrialReport> reports;
    reports.reserve(ensembles.size());
    for (const EnsembleSpec& spec : ensembles) {
        reports.push_back(mc_face_ratio(dims, shape, spec, trials, seed, opts));
    }
    return reports;
}

PhaseTable phase_diagram(const PhaseDiagramParams& params, const RunOptions& opts) {
    if (params.grid < 4) throw std::invalid_argument("phase_diagram needs grid >= 4");
    if (params.N < 4) throw std::invalid_argument("phase_diagram needs N >= 4");

    PhaseTable table;
    table.N = params.N;
    table.grid = params.grid;
    table.shape = params.shape;
    table.cells.reserve(static_cast<std::size_t>(params.grid) * params.grid);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int gi = 1; gi <= params.grid; ++gi) {
        const double delta = static_cast<double>(gi) / (params.grid + 1);
        for (int gj = 1; gj <= params.grid; ++gj) {
            const double rho = static_cast<double>(gj) / (params.grid + 1);
            PhaseCell cell;
            cell.delta = delta;
            cell.rho = rho;
            cell.dims.N = params.N;
            cell.dims.n = std::clamp(static_cast<int>(std::lround(delta * params.N)), 1, params.N - 1);
            cell.dims.k = std::clamp(static_cast<int>(std::lround(rho * cell.dims.n)), 0, cell.dims.n);
            cell.predicted = expected_face_ratio(cell.dims, params.shape).convert_to<double>();

            // Interior supports only: the k = 0 and k = n cells keep the
            // exact value and skip the Monte Carlo estimate.
            if (cell.dims.k > 0 && cell.dims.k < cell.dims.n) {
                const EnsembleSpec spec =
                    EnsembleSpec::make(params.kind, cell.dims.n, cell.dims.N, params.seed);
                const TrialReport mc =
                    mc_face_ratio(cell.dims, params.shape, spec, params.trials, params.seed, opts);
                cell.empirical = mc.empirical;
                cell.stderr_ = mc.stderr_;
                cell.indeterminate = mc.indeterminate;
                cell.mc_run = true;
            } else {
                cell.empirical = nan;
                cell.stderr_ = nan;
            }
            table.cells.push_back(cell);
        }
    }
    return table;
}

FourierReport fourier_neighborliness(int n, int N, double tol, int k_max) {
    FourierReport report;
    report.n = n;
    report.N = N;
    report.neighborliness_bound = (n - 1) / 2;
    if (k_max < 0) k_max = report.neighborliness_bound;

    const Eigen::MatrixXd W = build_partial_fourier(n, N);
    const NullBasis basis = nullspace_basis(W);

    report.all_survive_below_bound = true;
    report.zero_indeterminate_below_bound = true;
    for (int k = 0; k <= k_max; ++k) {
        FourierFaceLine line;
        line.k = k;
        // Mirror count_faces_exhaustive, but remember which faces failed.
        FaceSpec face;
        face.shape = Shape::Orthant;
        face.support.resize(k);
        std::iota(face.support.begin(), face.support.end(), 0);
        line.count.total = 0;
        bool more = true;
        while (more) {
            ++line.count.total;
            const SurvivalVerdict v = face_survives(basis, face, tol);
            if (v.status == Survival::Survives) {
                ++line.count.survived;
            } else {
                if (v.status == Survival::Indeterminate) ++line.count.indeterminate;
                if (line.failed_supports.size() < 20) line.failed_supports.push_back(face.support);
            }
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
        if (k <= report.neighborliness_bound) {
            if (line.count.survived != line.count.total) report.all_survive_below_bound = false;
            if (line.count.indeterminate != 0) report.zero_indeterminate_below_bound = false;
        }
        report.lines.push_back(std::move(line));
    }
    return report;
}

BijectionReport adjoin_ones_bijection(int N, int n, std::int64_t trials, std::uint64_t seed,
                                      const RunOptions& opts) {
    if (n < 2 || n >= N) throw std::invalid_argument("adjoin_ones_bijection needs 2 <= n < N");
    BijectionReport report;
    report.n = n;
    report.N = N;
    report.trials = trials;
    report.per_trial.resize(trials);

    parallel_for(trials, resolve_thread_count(opts.threads), [&](std::int64_t t) {
        BijectionTrial& outcome = report.per_trial[t];
        outcome.trial = t;
        const EnsembleSpec inner = EnsembleSpec::make(EnsembleKind::GaussianIID, n - 1, N, seed);
        const Eigen::MatrixXd A = sample_matrix(inner, t);
        const Eigen::MatrixXd adjoined = adjoin_ones(A);
        const NullBasis basis_adjoined = nullspace_basis(adjoined);
        const NullBasis basis_inner = nullspace_basis(A);

        outcome.conclusive = true;
        outcome.counts_equal = true;
        for (int k = 1; k < n; ++k) {
            const FaceCount orthant = count_faces_exhaustive(basis_adjoined, Shape::Orthant, k, opts.tol);
            const FaceCount simplex = count_faces_exhaustive(basis_inner, Shape::Simplex, k, opts.tol);
            outcome.orthant_counts.push_back(orthant.survived);
            outcome.simplex_counts.push_back(simplex.survived);
            if (orthant.indeterminate > 0 || simplex.indeterminate > 0) outcome.conclusive = false;
            if (orthant.survived != simplex.survived) outcome.counts_equal = false;
        }
    });

    for (const BijectionTrial& t : report.per_trial) {
        if (t.conclusive) {
            ++report.conclusive;
            if (t.counts_equal) ++report.equal;
        }
    }
    return report;
}

namespace {

enum class RecoveryOutcome : std::uint8_t {
    Success,
    Failure,
    LpFailure,
};

struct RecoveryTrialResult {
    RecoveryOutcome outcome = RecoveryOutcome::LpFailure;
    bool certified = false;
};

RecoveryTrialResult run_recovery_trial(const DimensionSpec& dims, const EnsembleSpec& ensemble,
                                       RecoveryKind kind, std::uint64_t seed, std::int64_t t,
                                       double tol) {
    RecoveryTrialResult result;
    const Eigen::MatrixXd A = sample_matrix(ensemble, t);
    const NullBasis basis = nullspace_basis(A);
    TrialRng rng(seed, static_cast<std::uint64_t>(t), RngDomain::Plant);

    // Support of the planted vector: a uniform k-subset.
    const int N = dims.N;
    std::vector<int> pool(N);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < dims.k; ++i) {
        const int pick = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(N - i)));
        std::swap(pool[i], pool[pick]);
    }
    std::vector<int> support(pool.begin(), pool.begin() + dims.k);
    std::sort(support.begin(), support.end());

    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(N);
    for (int i : support) x0(i) = rng.uniform_open01();

    FaceSpec face;
    face.support = support;
    if (kind == RecoveryKind::KSparseNonneg) {
        face.shape = Shape::Orthant;
    } else {
        face.shape = Shape::Hypercube;
        for (int i = 0; i < N; ++i) {
            if (std::binary_search(support.begin(), support.end(), i)) continue;
            if (rng.coin()) {
                face.upper.push_back(i);
                x0(i) = 1.0;
            }
        }
    }

    const Eigen::VectorXd b = A * x0;
    result.certified = face_survives(basis, face, tol).status == Survival::Survives;

    if (kind == RecoveryKind::KSparseNonneg) {
        const LPSolution sol = min_l1_nonneg(A, b);
        if (sol.status != LPStatus::Optimal) {
            result.outcome = RecoveryOutcome::LpFailure;
        } else {
            result.outcome = ((sol.x - x0).cwiseAbs().maxCoeff() <= kRecoveryTol)
                                 ? RecoveryOutcome::Success
                                 : RecoveryOutcome::Failure;
        }
    } else {
        result.outcome = RecoveryOutcome::Success;
        for (int j = 0; j < N; ++j) {
            const BoxRange range = box_range(A, b, j);
            if (range.status != LPStatus::Optimal) {
                result.outcome = RecoveryOutcome::LpFailure;
                break;
            }
            if (range.width() > kRecoveryTol) {
                result.outcome = RecoveryOutcome::Failure;
                break;
            }
        }
    }
    return result;
}

}  // namespace

RecoveryReport recovery_trial(const DimensionSpec& dims, const EnsembleSpec& ensemble,
                              RecoveryKind kind, std::int64_t trials, std::uint64_t seed,
                              const RunOptions& opts) {
    dims.validate();
    ensemble.validate();
    if (ensemble.rows != dims.n || ensemble.cols != dims.N) {
        throw std::invalid_argument("ensemble dimensions disagree with the dimension spec");
    }
    RecoveryReport report;
    report.dims = dims;
    report.ensemble = ensemble;
    report.kind = kind;
    report.trials = trials;

    std::vector<RecoveryTrialResult> results(trials);
    parallel_for(trials, resolve_thread_count(opts.threads), [&](std::int64_t t) {
        results[t] = run_recovery_trial(dims, ensemble, kind, seed, t, opts.tol);
    });

    for (const RecoveryTrialResult& r : results) {
        if (r.certified) ++report.uniqueness_certified;
        switch (r.outcome) {
            case RecoveryOutcome::Success: ++report.successes; break;
            case RecoveryOutcome::LpFailure: ++report.lp_failures; break;
            case RecoveryOutcome::Failure:
                if (r.certified) ++report.certified_but_failed;
                break;
        }
    }
    return report;
}

namespace {

void append_comments(std::ostringstream& out, const std::vector<std::string>& comments) {
    for (const std::string& line : comments) out << "# " << line << "\n";
}

}  // namespace

std::string trial_reports_to_csv(const std::vector<TrialReport>& reports,
                                 const std::vector<std::string>& comments) {
    std::ostringstream out;
    append_comments(out, comments);
    out << "shape,ensemble,k,n,N,trials,survived,lost,indeterminate,predicted,empirical,stderr\n";
    for (const TrialReport& r : reports) {
        out << to_string(r.shape) << ',' << r.ensemble.name() << ',' << r.dims.k << ',' << r.dims.n
            << ',' << r.dims.N << ',' << r.trials << ',' << r.survived << ',' << r.lost << ','
            << r.indeterminate << ',' << format_double(r.predicted.convert_to<double>()) << ','
            << format_double(r.empirical) << ',' << format_double(r.stderr_) << '\n';
    }
    return out.str();
}

std::string phase_table_to_csv(const PhaseTable& table, const std::vector<std::string>& comments) {
    std::ostringstream out;
    append_comments(out, comments);
    out << "delta,rho,k,n,N,predicted,empirical,stderr,indeterminate\n";
    for (const PhaseCell& c : table.cells) {
        out << format_double(c.delta) << ',' << format_double(c.rho) << ',' << c.dims.k << ','
            << c.dims.n << ',' << c.dims.N << ',' << format_double(c.predicted) << ','
            << format_double(c.empirical) << ',' << format_double(c.stderr_) << ','
            << c.indeterminate << '\n';
    }
    return out.str();
}

std::string recovery_reports_to_csv(const std::vector<RecoveryReport>& reports,
                                    const std::vector<std::string>& comments) {
    std::ostringstream out;
    append_comments(out, comments);
    out << "kind,ensemble,k,n,N,trials,successes,certified,lp_failures\n";
    for (const RecoveryReport& r : reports) {
        out << to_string(r.kind) << ',' << r.ensemble.name() << ',' << r.dims.k << ',' << r.dims.n
            << ',' << r.dims.N << ',' << r.trials << ',' << r.successes << ','
            << r.uniqueness_certified << ',' << r.lp_failures << '\n';
    }
    return out.str();
}

}  // namespace polyface
