#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsr/decomp.hpp"
#include "qsr/supply.hpp"
#include "qsr/trajectory.hpp"
#include "qsr/verify.hpp"

namespace qsr {

// One-parameter supply family whose feasible set is upward closed:
// phi(theta2) - phi(theta1) is PSD for theta2 >= theta1.
struct ParametricFamily {
    std::string name;
    std::function<SupplyForm(double)> builder;
};

ParametricFamily l2_gain_family(std::size_t m, std::size_t p);
// w = y'u + theta |u|^2; the bisected theta is the smallest admissible input
// feedthrough relaxation.
ParametricFamily input_passivity_family(std::size_t m);

struct UnboundedParameterError : std::runtime_error {
    UnboundedParameterError() : std::runtime_error("parameter search unbounded above") {}
};

struct BisectionResult {
    double theta_star = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t iterations = 0;
};

// Bisection on the monotone verification verdict; the bracket upper end is
// expanded by doubling from max(hi, 1) up to 1e6 when needed.
BisectionResult bisect_parameter(const DatasetCollection& coll, const ParametricFamily& family,
                                 const ProblemDims& dims, double lo, double hi, double tol_theta,
                                 const ToleranceConfig& cfg);

// Linear family of symmetric candidate supply matrices.
struct StructureSpec {
    std::vector<Matrix> basis;
    bool require_phi_pd = true;
    std::size_t window = 0;
    std::size_t input_dim = 0;
    std::size_t output_dim = 0;

    void validate(const ToleranceConfig& cfg) const;
};

struct SearchOptions {
    std::size_t iterations = 2000;
    double step0 = 0.1;
};

struct SearchResult {
    SupplyForm phi;
    std::vector<double> coefficients;  // unit norm
    double margin_condition = 0.0;     // smallest eigenvalue on the spanned subspace
    double margin_phi = 0.0;           // smallest eigenvalue of phi
    double objective = 0.0;
    std::size_t iterations = 0;
};

// Projected subgradient ascent on f(c) = min(lambda_min of the restricted
// condition matrix, optionally lambda_min of phi(c)) over unit-norm
// coefficients. Returns the best iterate when its objective is strictly
// positive, after re-checking both sides with is_psd; absent otherwise.
std::optional<SearchResult> search_phi(const DatasetCollection& coll, const StructureSpec& spec,
                                       const ProblemDims& dims, const SearchOptions& opts,
                                       const ToleranceConfig& cfg);

}  // namespace qsr
