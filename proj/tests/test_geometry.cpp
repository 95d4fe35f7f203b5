#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "polyface/ensembles.hpp"
#include "polyface/geometry.hpp"
#include "polyface/parallel.hpp"
#include "polyface/rng.hpp"

using namespace polyface;

namespace {

NullBasis basis_from_rows(const Eigen::MatrixXd& B) {
    NullBasis basis;
    basis.B = B;
    basis.residual = 0.0;
    basis.rank_certified = true;
    return basis;
}

Eigen::MatrixXd gaussian(int rows, int cols, std::uint64_t seed, std::uint64_t trial = 0) {
    return sample_matrix(EnsembleSpec::make(EnsembleKind::GaussianIID, rows, cols, seed), trial);
}

// ---- exact integer survival oracle for 3x6 sign matrices ----------------
//
// The null space of a sign matrix in general position is spanned by three
// integer vectors built from the adjugate of its leading 3x3 block.  A face
// with support S fails to survive exactly when the cone
// {u in R^3 : m_i . u >= 0 for i off S} contains a nonzero vector, which in
// dimension 3 can be decided exactly: the cone is nontrivial iff the
// constraint rows are rank-deficient or some cross product of two rows
// satisfies every constraint.

using IVec3 = std::array<long long, 3>;

long long det3x3(const std::array<IVec3, 3>& r) {
    return r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) -
           r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0]) +
           r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
}

IVec3 cross(const IVec3& a, const IVec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

long long dot(const IVec3& a, const IVec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

struct SignMatrix {
    std::array<std::array<int, 6>, 3> a;

    static SignMatrix from_bits(unsigned bits) {
        SignMatrix s;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 6; ++j) s.a[i][j] = (bits >> (6 * i + j)) & 1 ? 1 : -1;
        }
        return s;
    }

    Eigen::MatrixXd dense() const {
        Eigen::MatrixXd M(3, 6);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 6; ++j) M(i, j) = a[i][j];
        }
        return M;
    }

    long long minor3(int c0, int c1, int c2) const {
        return static_cast<long long>(a[0][c0]) * (a[1][c1] * a[2][c2] - a[1][c2] * a[2][c1]) -
               static_cast<long long>(a[0][c1]) * (a[1][c0] * a[2][c2] - a[1][c2] * a[2][c0]) +
               static_cast<long long>(a[0][c2]) * (a[1][c1] * a[2][c0] - a[1][c0] * a[2][c1]) * -1;
    }

    bool general_position() const {
        for (int c0 = 0; c0 < 6; ++c0) {
            for (int c1 = c0 + 1; c1 < 6; ++c1) {
                for (int c2 = c1 + 1; c2 < 6; ++c2) {
                    if (minor3(c0, c1, c2) == 0) return false;
                }
            }
        }
        return true;
    }

    /// Integer nullspace rows: entry (i, b) is coordinate i of basis vector b.
    std::array<IVec3, 6> null_rows() const {
        // adjugate of the leading 3x3 block P
        long long P[3][3], adj[3][3];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) P[i][j] = a[i][j];
        }
        adj[0][0] = P[1][1] * P[2][2] - P[1][2] * P[2][1];
        adj[0][1] = -(P[0][1] * P[2][2] - P[0][2] * P[2][1]);
        adj[0][2] = P[0][1] * P[1][2] - P[0][2] * P[1][1];
        adj[1][0] = -(P[1][0] * P[2][2] - P[1][2] * P[2][0]);
        adj[1][1] = P[0][0] * P[2][2] - P[0][2] * P[2][0];
        adj[1][2] = -(P[0][0] * P[1][2] - P[0][2] * P[1][0]);
        adj[2][0] = P[1][0] * P[2][1] - P[1][1] * P[2][0];
        adj[2][1] = -(P[0][0] * P[2][1] - P[0][1] * P[2][0]);
        adj[2][2] = P[0][0] * P[1][1] - P[0][1] * P[1][0];
        const long long det = P[0][0] * adj[0][0] + P[0][1] * adj[1][0] + P[0][2] * adj[2][0];

        // basis vector b (for free column 3+b): v[3+b] = det, v[i] = -(adj q_b)_i
        std::array<IVec3, 6> rows{};
        for (int b = 0; b < 3; ++b) {
            for (int i = 0; i < 3; ++i) {
                long long s = 0;
                for (int j = 0; j < 3; ++j) s += adj[i][j] * a[j][3 + b];
                rows[i][b] = -s;
            }
            for (int i = 0; i < 3; ++i) rows[3 + i][b] = (i == b) ? det : 0;
        }
        return rows;
    }
};

/// True iff some nonzero u satisfies m . u >= 0 for every constraint row.
bool cone_has_nonzero(const std::vector<IVec3>& rows) {
    // rank below 3 leaves a full line inside the cone
    bool rank3 = false;
    for (std::size_t i = 0; i < rows.size() && !rank3; ++i) {
        for (std::size_t j = i + 1; j < rows.size() && !rank3; ++j) {
            for (std::size_t k = j + 1; k < rows.size() && !rank3; ++k) {
                if (det3x3({rows[i], rows[j], rows[k]}) != 0) rank3 = true;
            }
        }
    }
    if (!rank3) return true;

    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            const IVec3 r = cross(rows[i], rows[j]);
            if (r[0] == 0 && r[1] == 0 && r[2] == 0) continue;
            for (const long long sign : {1LL, -1LL}) {
                bool inside = true;
                for (const IVec3& m : rows) {
                    if (sign * dot(m, r) < 0) {
                        inside = false;
                        break;
                    }
                }
                if (inside) return true;
            }
        }
    }
    return false;
}

struct OracleTally {
    long long faces = 0;
    long long conclusive = 0;
    long long conflicts = 0;
};

void compare_with_oracle(const SignMatrix& sm, const NullBasis& nb, const std::vector<int>& support,
                         OracleTally& tally) {
    const auto null_rows = sm.null_rows();
    std::vector<IVec3> rows;
    for (int i = 0; i < 6; ++i) {
        if (!std::binary_search(support.begin(), support.end(), i)) rows.push_back(null_rows[i]);
    }
    const bool exact_lost = cone_has_nonzero(rows);

    FaceSpec face;
    face.shape = Shape::Orthant;
    face.support = support;
    const SurvivalVerdict verdict = face_survives(nb, face);

    ++tally.faces;
    if (verdict.status == Survival::Indeterminate) return;
    ++tally.conclusive;
    const bool lp_lost = (verdict.status == Survival::Lost);
    if (lp_lost != exact_lost) ++tally.conflicts;
}

}  // namespace

TEST_CASE("nullspace basis") {
    Eigen::MatrixXd A(2, 3);
    A << 1, 0, 0, 0, 1, 0;
    const NullBasis nb = nullspace_basis(A);
    REQUIRE(nb.B.rows() == 1);
    REQUIRE(nb.B.cols() == 3);
    CHECK(std::abs(nb.B(0, 2)) == Catch::Approx(1.0).margin(1e-12));
    CHECK((A * nb.B.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(nb.rank_certified);

    const Eigen::MatrixXd G = gaussian(4, 8, 99);
    const NullBasis nbg = nullspace_basis(G);
    CHECK(nbg.B.rows() == 4);
    CHECK(nbg.B.cols() == 8);
    CHECK(nbg.residual <= 1e-12);
    const Eigen::MatrixXd gram = nbg.B * nbg.B.transpose() - Eigen::MatrixXd::Identity(4, 4);
    CHECK(gram.cwiseAbs().maxCoeff() <= 1e-12);

    Eigen::MatrixXd dup(2, 4);
    dup << 1, 2, 3, 4, 1, 2, 3, 4;
    CHECK_THROWS_AS(nullspace_basis(dup), std::runtime_error);
}

TEST_CASE("max margin direction") {
    std::vector<Eigen::VectorXd> quadrant{Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)};
    const MarginResult quad = max_margin_direction(quadrant);
    REQUIRE(quad.solver_ok);
    CHECK(quad.t_star == Catch::Approx(1.0).margin(1e-9));
    CHECK(quad.direction(0) == Catch::Approx(1.0).margin(1e-9));
    CHECK(quad.direction(1) == Catch::Approx(1.0).margin(1e-9));

    std::vector<Eigen::VectorXd> spanning{Eigen::Vector2d(1, 0), Eigen::Vector2d(-1, 0),
                                          Eigen::Vector2d(0, 1), Eigen::Vector2d(0, -1)};
    const MarginResult span = max_margin_direction(spanning);
    REQUIRE(span.solver_ok);
    CHECK(span.t_star < 0.0);
    CHECK(span.t_star == Catch::Approx(-1.0).margin(1e-9));

    std::vector<Eigen::VectorXd> point{Eigen::Vector2d(1, 0)};
    std::vector<Eigen::VectorXd> equality{Eigen::Vector2d(1, 0)};
    const MarginResult forced = max_margin_direction(point, equality);
    REQUIRE(forced.solver_ok);
    CHECK(std::abs(forced.t_star) <= 1e-9);
}

TEST_CASE("face survival against a coordinate projector") {
    // B spans e3: the x3 ray collapses, so the 2-face on {x1,x2} is lost.
    Eigen::MatrixXd B(1, 3);
    B << 0, 0, 1;
    const NullBasis nb = basis_from_rows(B);

    FaceSpec lost;
    lost.shape = Shape::Orthant;
    lost.support = {0, 1};
    const SurvivalVerdict v1 = face_survives(nb, lost);
    CHECK(v1.status == Survival::Lost);
    CHECK(v1.margin == Catch::Approx(1.0).margin(1e-9));
    REQUIRE(v1.witness);

    FaceSpec degenerate;
    degenerate.shape = Shape::Orthant;
    degenerate.support = {2};
    CHECK(face_survives(nb, degenerate).status == Survival::Indeterminate);

    FaceSpec apex;
    apex.shape = Shape::Orthant;
    CHECK(face_survives(nb, apex).status == Survival::Survives);
}

TEST_CASE("lost verdicts carry a consistent witness") {
    for (int t = 0; t < 20; ++t) {
        const NullBasis nb = nullspace_basis(gaussian(4, 8, 31, t));
        FaceSpec face;
        face.shape = Shape::Orthant;
        face.support = {0, 1, 2, 3};  // k = n faces are always lost
        const SurvivalVerdict v = face_survives(nb, face);
        REQUIRE(v.status == Survival::Lost);
        REQUIRE(v.witness);
        for (int i = 4; i < 8; ++i) {
            CHECK(nb.B.col(i).dot(*v.witness) >= v.margin * (1.0 - 1e-6));
        }
    }
}

TEST_CASE("lost vertex construction") {
    Eigen::MatrixXd B(1, 3);
    B << 1, -1, 1;
    const FaceSpec face = lost_vertex(basis_from_rows(B));
    CHECK(face.shape == Shape::Hypercube);
    CHECK(face.support.empty());
    CHECK(face.upper == std::vector<int>{1});

    Eigen::MatrixXd tie(1, 3);
    tie << 1, 0, 1;
    CHECK(lost_vertex(basis_from_rows(tie)).upper == std::vector<int>{1});

    for (int t = 0; t < 50; ++t) {
        const NullBasis nb = nullspace_basis(gaussian(6, 10, 17, t));
        CHECK(face_survives(nb, lost_vertex(nb)).status == Survival::Lost);
    }
}

TEST_CASE("hypercube pinning reduces to column sign flips") {
    for (int t = 0; t < 10; ++t) {
        const NullBasis nb = nullspace_basis(gaussian(4, 9, 53, t));
        TrialRng rng(53, t, RngDomain::Oracle);
        FaceSpec face;
        face.shape = Shape::Hypercube;
        for (int i = 0; i < 9; ++i) {
            const auto bucket = rng.below(3);
            if (bucket == 0) face.support.push_back(i);
            if (bucket == 1) face.upper.push_back(i);
        }
        if (face.support.empty()) face.support.push_back(8);

        Eigen::MatrixXd flipped = nb.B;
        for (int i : face.upper) flipped.col(i) = -flipped.col(i);
        FaceSpec plain;
        plain.shape = Shape::Hypercube;
        plain.support = face.support;

        const SurvivalVerdict a = face_survives(nb, face);
        const SurvivalVerdict b = face_survives(basis_from_rows(flipped), plain);
        CHECK(a.status == b.status);
        CHECK(std::abs(a.margin - b.margin) <= 1e-9);
    }
}

TEST_CASE("column permutation equivariance") {
    const NullBasis nb = nullspace_basis(gaussian(4, 9, 71));
    std::vector<int> perm{3, 7, 1, 0, 8, 5, 2, 6, 4};
    Eigen::MatrixXd permuted(nb.B.rows(), nb.B.cols());
    for (int j = 0; j < 9; ++j) permuted.col(j) = nb.B.col(perm[j]);

    for (const std::vector<int>& support : {std::vector<int>{0, 4}, std::vector<int>{2, 5, 8}}) {
        FaceSpec face;
        face.shape = Shape::Orthant;
        face.support = support;
        // the permuted face indexes the same columns through perm
        FaceSpec mapped;
        mapped.shape = Shape::Orthant;
        for (int s : support) {
            mapped.support.push_back(
                static_cast<int>(std::find(perm.begin(), perm.end(), s) - perm.begin()));
        }
        std::sort(mapped.support.begin(), mapped.support.end());
        const SurvivalVerdict a = face_survives(nb, face);
        const SurvivalVerdict b = face_survives(basis_from_rows(permuted), mapped);
        CHECK(a.status == b.status);
        CHECK(std::abs(a.margin - b.margin) <= 1e-9);
    }
}

TEST_CASE("orthant and hypercube verdicts agree on lower faces") {
    for (int t = 0; t < 10; ++t) {
        const NullBasis nb = nullspace_basis(gaussian(3, 7, 29, t));
        FaceSpec orthant;
        orthant.shape = Shape::Orthant;
        orthant.support = {1, 4};
        FaceSpec cube = orthant;
        cube.shape = Shape::Hypercube;
        const SurvivalVerdict a = face_survives(nb, orthant);
        const SurvivalVerdict b = face_survives(nb, cube);
        CHECK(a.status == b.status);
        CHECK(a.margin == b.margin);
    }
}

TEST_CASE("exhaustive face counts") {
    const NullBasis nb = nullspace_basis(gaussian(4, 8, 5));
    const FaceCount k4 = count_faces_exhaustive(nb, Shape::Orthant, 4);
    CHECK(k4.total == 70);
    CHECK(k4.survived == 0);  // k = n faces never survive
    CHECK(k4.indeterminate == 0);

    const FaceCount k1 = count_faces_exhaustive(nb, Shape::Orthant, 1);
    CHECK(k1.total == 8);

    const NullBasis small = nullspace_basis(gaussian(3, 6, 6));
    const FaceCount cube = count_faces_exhaustive(small, Shape::Hypercube, 1);
    CHECK(cube.total == 6 * (1 << 5));

    const FaceCount simplex = count_faces_exhaustive(small, Shape::Simplex, 2);
    CHECK(simplex.total == 15);

    CHECK_THROWS_AS(count_faces_exhaustive(small, Shape::Simplex, 0), std::invalid_argument);
    const NullBasis wide = nullspace_basis(gaussian(4, 40, 5));
    CHECK_THROWS_AS(count_faces_exhaustive(wide, Shape::Hypercube, 0), std::invalid_argument);
}

TEST_CASE("highpass nullspace vectors are spread in sign") {
    CHECK(highpass_negativity_check(5, 11, 1000));
    CHECK(highpass_negativity_check(1, 4, 100));  // vacuous bound m = 0
    CHECK(highpass_negativity_check(3, 7, 500));
}

TEST_CASE("face spec JSON and validation") {
    FaceSpec face;
    face.shape = Shape::Hypercube;
    face.support = {1, 4};
    face.upper = {0, 6};
    const FaceSpec parsed = FaceSpec::from_json(face.to_json());
    CHECK(parsed.shape == face.shape);
    CHECK(parsed.support == face.support);
    CHECK(parsed.upper == face.upper);

    FaceSpec overlap = face;
    overlap.upper = {1};
    CHECK_THROWS_AS(overlap.validate(8), std::invalid_argument);
    FaceSpec unsorted = face;
    unsorted.support = {4, 1};
    CHECK_THROWS_AS(unsorted.validate(8), std::invalid_argument);
    FaceSpec orthant_with_upper = face;
    orthant_with_upper.shape = Shape::Orthant;
    CHECK_THROWS_AS(orthant_with_upper.validate(8), std::invalid_argument);
    FaceSpec empty_simplex;
    empty_simplex.shape = Shape::Simplex;
    CHECK_THROWS_AS(empty_simplex.validate(8), std::invalid_argument);
}

TEST_CASE("sign-matrix oracle: every 3x6 sign matrix, one 2-face") {
    // Column exchangeability makes the fixed support {0,1} representative:
    // sweeping all matrices sweeps all 2-faces of all matrices.
    const int total = 1 << 18;
    std::vector<OracleTally> tallies(64);
    std::atomic<int> next_block{0};
    parallel_for(64, resolve_thread_count(0) > 1 ? 2 : 1, [&](std::int64_t block) {
        OracleTally& tally = tallies[block];
        const int lo = static_cast<int>(block) * (total / 64);
        const int hi = lo + total / 64;
        for (int bits = lo; bits < hi; ++bits) {
            const SignMatrix sm = SignMatrix::from_bits(static_cast<unsigned>(bits));
            if (!sm.general_position()) continue;
            const NullBasis nb = nullspace_basis(sm.dense());
            compare_with_oracle(sm, nb, {0, 1}, tally);
        }
    });
    (void)next_block;
    OracleTally sum;
    for (const OracleTally& t : tallies) {
        sum.faces += t.faces;
        sum.conclusive += t.conclusive;
        sum.conflicts += t.conflicts;
    }
    INFO("faces=" << sum.faces << " conclusive=" << sum.conclusive << " conflicts=" << sum.conflicts);
    CHECK(sum.faces > 100000);  // most sign matrices are in general position
    CHECK(sum.conflicts == 0);
    CHECK(sum.conclusive >= sum.faces * 9 / 10);
}

TEST_CASE("sign-matrix oracle: random matrices, all small faces") {
    OracleTally tally;
    TrialRng rng(0x51677, 0, RngDomain::Oracle);
    int tested = 0;
    while (tested < 800) {
        const unsigned bits = static_cast<unsigned>(rng.below(1u << 18));
        const SignMatrix sm = SignMatrix::from_bits(bits);
        if (!sm.general_position()) continue;
        ++tested;
        const NullBasis nb = nullspace_basis(sm.dense());
        for (int k = 1; k <= 3; ++k) {
            std::vector<int> support(k);
            std::iota(support.begin(), support.end(), 0);
            while (true) {
                compare_with_oracle(sm, nb, support, tally);
                int i = k - 1;
                while (i >= 0 && support[i] == 6 - k + i) --i;
                if (i < 0) break;
                ++support[i];
                for (int j = i + 1; j < k; ++j) support[j] = support[j - 1] + 1;
            }
        }
    }
    INFO("faces=" << tally.faces << " conclusive=" << tally.conclusive
                  << " conflicts=" << tally.conflicts);
    CHECK(tally.faces == 800 * (6 + 15 + 20));
    CHECK(tally.conflicts == 0);
}
