#ifndef POLYFACE_TYPES_HPP
#define POLYFACE_TYPES_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/gmp.hpp>

namespace polyface {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

/**
 * The three polyhedral generators whose projected faces we count:
 * the positive orthant (a cone), the unit hypercube [0,1]^N, and the
 * standard simplex (convex hull of the basis vectors).
 */
enum class Shape { Orthant, Hypercube, Simplex };

std::string to_string(Shape shape);
Shape shape_from_string(const std::string& name);

/**
 * A triple of face/small/large dimensions (k, n, N): a face dimension k,
 * a projection target dimension n, and an ambient dimension N.
 */
struct DimensionSpec {
    int k = 0;
    int n = 0;
    int N = 0;

    /// Throws std::invalid_argument unless 0 <= k <= n < N.
    void validate() const;
};

/**
 * The proportional-dimensional parameters: delta = n/N (undersampling)
 * and rho = k/n (sparsity), both in the open interval (0,1).
 */
struct PhaseParams {
    double delta = 0.0;
    double rho = 0.0;

    void validate() const;
};

/**
 * A combinatorial face of an orthant, hypercube, or simplex over N
 * coordinates (0-based indices).
 *
 * `support` lists the free coordinates: the k nonzero coordinates of an
 * orthant face, the k coordinates ranging over (0,1) for a hypercube face,
 * or the k-element support of a (k-1)-face of the simplex.  For hypercube
 * faces, `upper` lists the coordinates of the complement pinned at 1; the
 * remaining complement coordinates are pinned at 0.  Orthant and simplex
 * faces must have an empty `upper`.
 */
struct FaceSpec {
    Shape shape = Shape::Orthant;
    std::vector<int> support;  // sorted, duplicate-free
    std::vector<int> upper;    // sorted, disjoint from support

    /// Consistency checks against an ambient dimension N.
    void validate(int ambient_dim) const;

    std::string to_json() const;
    static FaceSpec from_json(const std::string& text);
};

enum class Survival { Survives, Lost, Indeterminate };

std::string to_string(Survival status);

/**
 * Outcome of a face-survival test.  `margin` is the optimal value of the
 * max-margin feasibility program: positive margins certify a direction
 * witnessing that the face is lost, negative margins certify survival,
 * and magnitudes below the caller's tolerance are reported Indeterminate.
 */
struct SurvivalVerdict {
    Survival status = Survival::Indeterminate;
    double margin = 0.0;
    std::optional<Eigen::VectorXd> witness;  // direction in R^{N-n}, when available
};

}  // namespace polyface

#endif  // POLYFACE_TYPES_HPP
