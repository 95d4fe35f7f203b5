#include "polyface/ensembles.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include <nlohmann/json.hpp>

#include "polyface/rng.hpp"

namespace polyface {

std::string to_string(EnsembleKind kind) {
    switch (kind) {
        case EnsembleKind::GaussianIID: return "GaussianIID";
        case EnsembleKind::UniformIID: return "UniformIID";
        case EnsembleKind::RademacherCensored: return "RademacherCensored";
        case EnsembleKind::TernaryIID: return "TernaryIID";
        case EnsembleKind::Orthoprojector: return "Orthoprojector";
        case EnsembleKind::SignEnsemble: return "SignEnsemble";
        case EnsembleKind::PartialFourier: return "PartialFourier";
        case EnsembleKind::AdjoinOnes: return "AdjoinOnes";
    }
    throw std::invalid_argument("unknown ensemble kind");
}

EnsembleKind ensemble_kind_from_string(const std::string& name) {
    if (name == "GaussianIID" || name == "gaussian") return EnsembleKind::GaussianIID;
    if (name == "UniformIID" || name == "uniform") return EnsembleKind::UniformIID;
    if (name == "RademacherCensored" || name == "rademacher") return EnsembleKind::RademacherCensored;
    if (name == "TernaryIID" || name == "ternary") return EnsembleKind::TernaryIID;
    if (name == "Orthoprojector" || name == "orthoprojector") return EnsembleKind::Orthoprojector;
    if (name == "SignEnsemble") return EnsembleKind::SignEnsemble;
    if (name == "PartialFourier" || name == "fourier") return EnsembleKind::PartialFourier;
    if (name == "AdjoinOnes") return EnsembleKind::AdjoinOnes;
    throw std::invalid_argument("unknown ensemble kind: " + name);
}

void EnsembleSpec::validate() const {
    if (rows < 1) throw std::invalid_argument("ensemble needs at least one row");
    if (rows >= cols) throw std::invalid_argument("ensemble needs rows < cols");
    const bool wants_inner = (kind == EnsembleKind::SignEnsemble || kind == EnsembleKind::AdjoinOnes);
    if (wants_inner && !inner) throw std::invalid_argument(to_string(kind) + " needs an inner spec");
    if (!wants_inner && inner) throw std::invalid_argument(to_string(kind) + " takes no inner spec");
    if (kind == EnsembleKind::PartialFourier && rows % 2 == 0) {
        throw std::invalid_argument("PartialFourier needs an odd number of rows");
    }
    if (kind == EnsembleKind::AdjoinOnes) {
        if (inner->rows != rows - 1 || inner->cols != cols) {
            throw std::invalid_argument("AdjoinOnes inner spec must have rows-1 rows and equal cols");
        }
        inner->validate();
    }
    if (kind == EnsembleKind::SignEnsemble) {
        if (inner->rows != rows || inner->cols != cols) {
            throw std::invalid_argument("SignEnsemble inner spec must match rows and cols");
        }
        inner->validate();
    }
}

std::string EnsembleSpec::name() const {
    if (inner) return to_string(kind) + "(" + inner->name() + ")";
    return to_string(kind);
}

namespace {

nlohmann::json spec_to_json_obj(const EnsembleSpec& spec) {
    nlohmann::json j;
    j["kind"] = to_string(spec.kind);
    j["rows"] = spec.rows;
    j["cols"] = spec.cols;
    j["seed"] = spec.seed;
    if (spec.inner) j["inner"] = spec_to_json_obj(*spec.inner);
    return j;
}

EnsembleSpec spec_from_json_obj(const nlohmann::json& j) {
    EnsembleSpec spec;
    spec.kind = ensemble_kind_from_string(j.at("kind").get<std::string>());
    spec.rows = j.at("rows").get<int>();
    spec.cols = j.at("cols").get<int>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("inner")) spec.inner = std::make_shared<EnsembleSpec>(spec_from_json_obj(j.at("inner")));
    return spec;
}

}  // namespace

std::string EnsembleSpec::to_json() const { return spec_to_json_obj(*this).dump(); }

EnsembleSpec EnsembleSpec::from_json(const std::string& text) {
    return spec_from_json_obj(nlohmann::json::parse(text));
}

EnsembleSpec EnsembleSpec::make(EnsembleKind kind, int rows, int cols, std::uint64_t seed) {
    EnsembleSpec spec;
    spec.kind = kind;
    spec.rows = rows;
    spec.cols = cols;
    spec.seed = seed;
    return spec;
}

EnsembleSpec EnsembleSpec::adjoin_ones_around(EnsembleKind inner_kind, int rows, int cols,
                                              std::uint64_t seed) {
    EnsembleSpec spec = make(EnsembleKind::AdjoinOnes, rows, cols, seed);
    spec.inner = std::make_shared<EnsembleSpec>(make(inner_kind, rows - 1, cols, seed));
    return spec;
}

EnsembleSpec EnsembleSpec::sign_flips_of(EnsembleKind inner_kind, int rows, int cols,
                                         std::uint64_t seed) {
    EnsembleSpec spec = make(EnsembleKind::SignEnsemble, rows, cols, seed);
    spec.inner = std::make_shared<EnsembleSpec>(make(inner_kind, rows, cols, seed + 1));
    return spec;
}

namespace {

Eigen::MatrixXd fill_iid(int rows, int cols, TrialRng& rng, double (TrialRng::*draw)()) {
    Eigen::MatrixXd M(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) M(i, j) = (rng.*draw)();
    }
    return M;
}

Eigen::MatrixXd sample_orthoprojector(int rows, int cols, TrialRng& rng) {
    const Eigen::MatrixXd G = fill_iid(rows, cols, rng, &TrialRng::gaussian);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(G.transpose());
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(cols, rows);
    const Eigen::MatrixXd R = qr.matrixQR().topRows(rows);
    // Fixing the R-diagonal signs makes the row span Haar-distributed.
    for (int j = 0; j < rows; ++j) {
        if (R(j, j) < 0) Q.col(j) = -Q.col(j);
        if (std::abs(R(j, j)) < 1e-300) throw std::runtime_error("degenerate orthoprojector draw");
    }
    return Q.transpose();
}

}  // namespace

Eigen::MatrixXd sample_matrix(const EnsembleSpec& spec, std::int64_t trial_index) {
    spec.validate();
    if (trial_index < 0) throw std::invalid_argument("trial_index must be nonnegative");
    TrialRng rng(spec.seed, static_cast<std::uint64_t>(trial_index), RngDomain::Matrix);

    switch (spec.kind) {
        case EnsembleKind::GaussianIID:
            return fill_iid(spec.rows, spec.cols, rng, &TrialRng::gaussian);
        case EnsembleKind::UniformIID:
            return fill_iid(spec.rows, spec.cols, rng, &TrialRng::uniform_pm1);
        case EnsembleKind::RademacherCensored: {
            for (int attempt = 0; attempt < kCensoredRetryLimit; ++attempt) {
                const Eigen::MatrixXd A = fill_iid(spec.rows, spec.cols, rng, &TrialRng::rademacher);
                if (check_general_position(A).in_general_position) return A;
            }
            throw std::runtime_error("RademacherCensored: retry limit exceeded (degenerate spec?)");
        }
        case EnsembleKind::TernaryIID: {
            Eigen::MatrixXd M(spec.rows, spec.cols);
            for (int i = 0; i < spec.rows; ++i) {
                for (int j = 0; j < spec.cols; ++j) {
                    M(i, j) = static_cast<double>(rng.below(3)) - 1.0;
                }
            }
            return M;
        }
        case EnsembleKind::Orthoprojector:
            return sample_orthoprojector(spec.rows, spec.cols, rng);
        case EnsembleKind::SignEnsemble: {
            Eigen::MatrixXd A = sample_matrix(*spec.inner, 0);  // fixed generator
            for (int j = 0; j < spec.cols; ++j) A.col(j) *= rng.rademacher();
            return A;
        }
        case EnsembleKind::PartialFourier:
            return build_partial_fourier(spec.rows, spec.cols);
        case EnsembleKind::AdjoinOnes:
            return adjoin_ones(sample_matrix(*spec.inner, trial_index));
    }
    throw std::invalid_argument("unknown ensemble kind");
}

Eigen::MatrixXd build_partial_fourier(int n, int N) {
    if (n % 2 == 0) throw std::invalid_argument("build_partial_fourier needs odd n");
    if (!(n >= 1 && n < N)) throw std::invalid_argument("build_partial_fourier needs 1 <= n < N");
    Eigen::MatrixXd W(n, N);
    for (int r = 0; r < n; ++r) {
        const int i = r + 1;  // 1-based row index
        for (int c = 0; c < N; ++c) {
            const double j = static_cast<double>(c);  // j-1 in 1-based terms
            W(r, c) = (i % 2 == 1) ? std::cos(M_PI * j * (i - 1) / N) : std::sin(M_PI * j * i / N);
        }
    }
    return W;
}

Eigen::MatrixXd adjoin_ones(const Eigen::MatrixXd& A) {
    Eigen::MatrixXd out(A.rows() + 1, A.cols());
    out.row(0).setOnes();
    out.bottomRows(A.rows()) = A;
    return out;
}

namespace {

/// C(N, n) clamped at `cap` to avoid overflow.
std::int64_t binomial_clamped(int N, int n, std::int64_t cap) {
    double v = 1.0;
    for (int i = 1; i <= n; ++i) {
        v *= static_cast<double>(N - n + i) / i;
        if (v > static_cast<double>(cap) * 2.0) return cap + 1;
    }
    return static_cast<std::int64_t>(std::llround(v));
}

bool subset_ok(const Eigen::MatrixXd& A, const std::vector<int>& cols, double threshold) {
    const int n = static_cast<int>(A.rows());
    Eigen::MatrixXd sub(n, n);
    for (int j = 0; j < n; ++j) sub.col(j) = A.col(cols[j]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
    return svd.singularValues()(n - 1) > threshold;
}

}  // namespace

GeneralPositionCheck check_general_position(const Eigen::MatrixXd& A, double tol, std::int64_t budget) {
    const int n = static_cast<int>(A.rows());
    const int N = static_cast<int>(A.cols());
    if (n >= N) throw std::invalid_argument("check_general_position needs a wide matrix");

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const double threshold = tol * svd.singularValues()(0);

    GeneralPositionCheck result;
    const std::int64_t subsets = binomial_clamped(N, n, budget);
    if (subsets <= budget) {
        result.exhaustive = true;
        std::vector<int> cols(n);
        std::iota(cols.begin(), cols.end(), 0);
        while (true) {
            ++result.subsets_checked;
            if (!subset_ok(A, cols, threshold)) return result;
            // next lexicographic combination
            int i = n - 1;
            while (i >= 0 && cols[i] == N - n + i) --i;
            if (i < 0) break;
            ++cols[i];
            for (int j = i + 1; j < n; ++j) cols[j] = cols[j - 1] + 1;
        }
    } else {
        result.exhaustive = false;
        TrialRng rng(0x6A09E667F3BCC908ULL, 0, RngDomain::Subsets);
        std::vector<int> pool(N);
        for (std::int64_t s = 0; s < budget; ++s) {
            std::iota(pool.begin(), pool.end(), 0);
            for (int i = 0; i < n; ++i) {
                const int pick = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(N - i)));
                std::swap(pool[i], pool[pick]);
            }
            std::vector<int> cols(pool.begin(), pool.begin() + n);
            ++result.subsets_checked;
            if (!subset_ok(A, cols, threshold)) return result;
        }
    }
    result.in_general_position = true;
    return result;
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& M) {
    char buf[40];
    for (int i = 0; i < M.rows(); ++i) {
        for (int j = 0; j < M.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", M(i, j));
            if (j) out << ',';
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace polyface
