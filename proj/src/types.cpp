#include "polyface/types.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace polyface {

std::string to_string(Shape shape) {
    switch (shape) {
        case Shape::Orthant: return "Orthant";
        case Shape::Hypercube: return "Hypercube";
        case Shape::Simplex: return "Simplex";
    }
    throw std::invalid_argument("unknown shape");
}

Shape shape_from_string(const std::string& name) {
    if (name == "Orthant" || name == "orthant") return Shape::Orthant;
    if (name == "Hypercube" || name == "hypercube") return Shape::Hypercube;
    if (name == "Simplex" || name == "simplex") return Shape::Simplex;
    throw std::invalid_argument("unknown shape: " + name);
}

std::string to_string(Survival status) {
    switch (status) {
        case Survival::Survives: return "Survives";
        case Survival::Lost: return "Lost";
        case Survival::Indeterminate: return "Indeterminate";
    }
    throw std::invalid_argument("unknown survival status");
}

void DimensionSpec::validate() const {
    if (!(0 <= k && k <= n && n < N)) {
        throw std::invalid_argument("dimension spec must satisfy 0 <= k <= n < N, got (" +
                                    std::to_string(k) + ", " + std::to_string(n) + ", " +
                                    std::to_string(N) + ")");
    }
}

void PhaseParams::validate() const {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (0,1)");
}

namespace {

void check_sorted_unique_in_range(const std::vector<int>& v, int ambient_dim, const char* label) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < 0 || v[i] >= ambient_dim) {
            throw std::invalid_argument(std::string(label) + " index out of range");
        }
        if (i > 0 && v[i] <= v[i - 1]) {
            throw std::invalid_argument(std::string(label) + " indices must be strictly increasing");
        }
    }
}

}  // namespace

void FaceSpec::validate(int ambient_dim) const {
    check_sorted_unique_in_range(support, ambient_dim, "support");
    check_sorted_unique_in_range(upper, ambient_dim, "upper");
    if (shape != Shape::Hypercube && !upper.empty()) {
        throw std::invalid_argument("upper set is only meaningful for hypercube faces");
    }
    for (int i : upper) {
        if (std::binary_search(support.begin(), support.end(), i)) {
            throw std::invalid_argument("upper set must be disjoint from the support");
        }
    }
    if (shape == Shape::Simplex && support.empty()) {
        throw std::invalid_argument("simplex faces need a nonempty support");
    }
}

std::string FaceSpec::to_json() const {
    nlohmann::json j;
    j["shape"] = polyface::to_string(shape);
    j["support"] = support;
    j["upper"] = upper;
    return j.dump();
}

FaceSpec FaceSpec::from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    FaceSpec face;
    face.shape = shape_from_string(j.at("shape").get<std::string>());
    face.support = j.at("support").get<std::vector<int>>();
    if (j.contains("upper")) face.upper = j.at("upper").get<std::vector<int>>();
    return face;
}

}  // namespace polyface
