#include <set>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "polyface/ensembles.hpp"

using namespace polyface;

namespace {

/// Brute-force 3x3 integer determinant; used as an independent oracle for
/// the censored-ensemble minors.
long long det3(const Eigen::MatrixXd& A, int c0, int c1, int c2) {
    const auto e = [&](int r, int c) { return static_cast<long long>(A(r, c)); };
    return e(0, c0) * (e(1, c1) * e(2, c2) - e(1, c2) * e(2, c1)) -
           e(0, c1) * (e(1, c0) * e(2, c2) - e(1, c2) * e(2, c0)) +
           e(0, c2) * (e(1, c0) * e(2, c1) - e(1, c1) * e(2, c0));
}

}  // namespace

TEST_CASE("sampling is a pure function of (seed, trial)") {
    const EnsembleSpec spec = EnsembleSpec::make(EnsembleKind::GaussianIID, 4, 8, 7);
    const Eigen::MatrixXd a = sample_matrix(spec, 0);
    const Eigen::MatrixXd b = sample_matrix(spec, 0);
    REQUIRE(a.rows() == 4);
    REQUIRE(a.cols() == 8);
    CHECK(a == b);  // bitwise

    // Order independence: trial 5 sampled before or after trial 2.
    const Eigen::MatrixXd t5 = sample_matrix(spec, 5);
    const Eigen::MatrixXd t2 = sample_matrix(spec, 2);
    CHECK(sample_matrix(spec, 5) == t5);
    CHECK(sample_matrix(spec, 2) == t2);
    CHECK(t5 != t2);

    const EnsembleSpec other = EnsembleSpec::make(EnsembleKind::GaussianIID, 4, 8, 8);
    CHECK(sample_matrix(other, 0) != a);
}

TEST_CASE("orthoprojector draws have orthonormal rows") {
    const EnsembleSpec spec = EnsembleSpec::make(EnsembleKind::Orthoprojector, 4, 8, 21);
    for (int t = 0; t < 20; ++t) {
        const Eigen::MatrixXd M = sample_matrix(spec, t);
        const Eigen::MatrixXd gram = M * M.transpose() - Eigen::MatrixXd::Identity(4, 4);
        CHECK(gram.cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("censored sign ensemble is in general position") {
    const EnsembleSpec spec = EnsembleSpec::make(EnsembleKind::RademacherCensored, 3, 6, 11);
    for (int t = 0; t < 25; ++t) {
        const Eigen::MatrixXd A = sample_matrix(spec, t);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 6; ++j) CHECK(std::abs(A(i, j)) == 1.0);
        }
        // every 3-column minor nonzero, by exact integer determinants
        for (int c0 = 0; c0 < 6; ++c0) {
            for (int c1 = c0 + 1; c1 < 6; ++c1) {
                for (int c2 = c1 + 1; c2 < 6; ++c2) CHECK(det3(A, c0, c1, c2) != 0);
            }
        }
    }
}

TEST_CASE("ternary entries") {
    const Eigen::MatrixXd A = sample_matrix(EnsembleSpec::make(EnsembleKind::TernaryIID, 3, 9, 5), 0);
    std::set<double> seen;
    for (int i = 0; i < A.rows(); ++i) {
        for (int j = 0; j < A.cols(); ++j) seen.insert(A(i, j));
    }
    for (double v : seen) CHECK((v == -1.0 || v == 0.0 || v == 1.0));
}

TEST_CASE("sign ensemble flips columns of a fixed generator") {
    const EnsembleSpec spec = EnsembleSpec::sign_flips_of(EnsembleKind::GaussianIID, 3, 7, 13);
    const Eigen::MatrixXd generator = sample_matrix(*spec.inner, 0);
    for (int t = 0; t < 5; ++t) {
        const Eigen::MatrixXd A = sample_matrix(spec, t);
        for (int j = 0; j < 7; ++j) {
            const bool same = (A.col(j) - generator.col(j)).cwiseAbs().maxCoeff() == 0.0;
            const bool negated = (A.col(j) + generator.col(j)).cwiseAbs().maxCoeff() == 0.0;
            CHECK((same || negated));
        }
    }
}

TEST_CASE("partial Fourier matrix") {
    const Eigen::MatrixXd row = build_partial_fourier(1, 4);
    REQUIRE(row.rows() == 1);
    for (int j = 0; j < 4; ++j) CHECK(row(0, j) == 1.0);

    const Eigen::MatrixXd W34 = build_partial_fourier(3, 4);
    CHECK(std::abs(W34(2, 1)) <= 1e-15);  // cos(pi/2)

    const Eigen::MatrixXd W = build_partial_fourier(5, 11);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(W);
    CHECK(lu.rank() == 5);

    // the all-ones row appears exactly once
    int ones_rows = 0;
    for (int i = 0; i < W.rows(); ++i) {
        if ((W.row(i).array() - 1.0).abs().maxCoeff() <= 1e-15) ++ones_rows;
    }
    CHECK(ones_rows == 1);

    CHECK_THROWS_AS(build_partial_fourier(4, 11), std::invalid_argument);
}

TEST_CASE("adjoin ones") {
    const Eigen::MatrixXd empty(0, 5);
    const Eigen::MatrixXd base = adjoin_ones(empty);
    REQUIRE(base.rows() == 1);
    CHECK(base.row(0).sum() == 5.0);

    const Eigen::MatrixXd A = sample_matrix(EnsembleSpec::make(EnsembleKind::GaussianIID, 4, 9, 3), 0);
    const Eigen::MatrixXd tilde = adjoin_ones(A);
    REQUIRE(tilde.rows() == 5);
    CHECK(tilde.bottomRows(4) == A);
    CHECK((tilde.row(0).array() == 1.0).all());
}

TEST_CASE("general position check") {
    Eigen::MatrixXd good(2, 3);
    good << 1, 0, 1, 0, 1, 1;
    CHECK(check_general_position(good).in_general_position);

    Eigen::MatrixXd bad(2, 3);
    bad << 1, 0, 1, 0, 1, 0;  // columns 1 and 3 are dependent
    CHECK_FALSE(check_general_position(bad).in_general_position);

    const Eigen::MatrixXd G = sample_matrix(EnsembleSpec::make(EnsembleKind::GaussianIID, 3, 6, 2), 0);
    const GeneralPositionCheck res = check_general_position(G);
    CHECK(res.in_general_position);
    CHECK(res.exhaustive);
    CHECK(res.subsets_checked == 20);

    // force the sampled fallback with a tiny budget
    const Eigen::MatrixXd big = sample_matrix(EnsembleSpec::make(EnsembleKind::GaussianIID, 4, 30, 2), 0);
    const GeneralPositionCheck sampled = check_general_position(big, 1e-10, 50);
    CHECK(sampled.in_general_position);
    CHECK_FALSE(sampled.exhaustive);
    CHECK(sampled.subsets_checked == 50);
}

TEST_CASE("ensemble spec validation and JSON") {
    CHECK_THROWS_AS(EnsembleSpec::make(EnsembleKind::GaussianIID, 8, 4, 0).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(EnsembleSpec::make(EnsembleKind::PartialFourier, 4, 11, 0).validate(),
                    std::invalid_argument);

    EnsembleSpec mismatched = EnsembleSpec::adjoin_ones_around(EnsembleKind::GaussianIID, 5, 9, 1);
    mismatched.inner->rows = 3;
    CHECK_THROWS_AS(mismatched.validate(), std::invalid_argument);

    const EnsembleSpec spec = EnsembleSpec::adjoin_ones_around(EnsembleKind::UniformIID, 5, 9, 42);
    const EnsembleSpec parsed = EnsembleSpec::from_json(spec.to_json());
    CHECK(parsed.kind == spec.kind);
    CHECK(parsed.rows == spec.rows);
    CHECK(parsed.cols == spec.cols);
    CHECK(parsed.seed == spec.seed);
    REQUIRE(parsed.inner);
    CHECK(parsed.inner->kind == EnsembleKind::UniformIID);
    CHECK(parsed.inner->rows == 4);
    CHECK(parsed.name() == "AdjoinOnes(UniformIID)");
    CHECK(sample_matrix(parsed, 3) == sample_matrix(spec, 3));
}

TEST_CASE("matrix CSV export round-trips at full precision") {
    const Eigen::MatrixXd A = sample_matrix(EnsembleSpec::make(EnsembleKind::GaussianIID, 2, 3, 9), 1);
    std::ostringstream out;
    write_matrix_csv(out, A);
    std::istringstream in(out.str());
    std::string line;
    int r = 0;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string cell;
        int c = 0;
        while (std::getline(row, cell, ',')) {
            CHECK(std::stod(cell) == A(r, c));
            ++c;
        }
        CHECK(c == 3);
        ++r;
    }
    CHECK(r == 2);
}
