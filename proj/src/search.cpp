#include "qsr/search.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qsr {

ParametricFamily l2_gain_family(std::size_t m, std::size_t p) {
    return {"l2-gain", [m, p](double gamma) { return preset_l2_gain(gamma, m, p); }};
}

ParametricFamily input_passivity_family(std::size_t m) {
    return {"input-passivity", [m](double theta) {
                const PhiBlock blk = qsr_block(0, 0, Matrix(m, m), 0.5 * Matrix::identity(m),
                                               theta * Matrix::identity(m));
                return assemble_phi_n({&blk, 1}, 0, m, m);
            }};
}

BisectionResult bisect_parameter(const DatasetCollection& coll, const ParametricFamily& family,
                                 const ProblemDims& dims, double lo, double hi, double tol_theta,
                                 const ToleranceConfig& cfg) {
    if (!(tol_theta > 0.0)) throw std::invalid_argument("bisect_parameter: tol must be positive");
    if (!(lo <= hi)) throw std::invalid_argument("bisect_parameter: bracket is inverted");

    const PreparedVerifier verifier(coll, dims, cfg);
    const auto feasible = [&](double theta) {
        return verifier.test(family.builder(theta)).verdict;
    };

    BisectionResult out;
    out.lo = lo;
    out.hi = hi;
    if (feasible(lo)) {
        out.theta_star = lo;
        out.hi = lo;
        return out;
    }

    double upper = std::max(hi, 1.0);
    ++out.iterations;
    while (!feasible(upper)) {
        ++out.iterations;
        if (upper > 1e6) throw UnboundedParameterError();
        upper *= 2.0;
    }

    double lower = lo;
    while (upper - lower > tol_theta) {
        const double mid = 0.5 * (lower + upper);
        ++out.iterations;
        if (feasible(mid))
            upper = mid;
        else
            lower = mid;
    }
    out.lo = lower;
    out.hi = upper;
    out.theta_star = upper;
    return out;
}

void StructureSpec::validate(const ToleranceConfig& cfg) const {
    if (basis.empty()) throw std::invalid_argument("StructureSpec: empty basis");
    if (input_dim < 1 || output_dim < 1)
        throw std::invalid_argument("StructureSpec: dimensions must be positive");
    const std::size_t dim = (window + 1) * (input_dim + output_dim);
    for (const Matrix& b : basis) {
        if (b.rows() != dim || b.cols() != dim)
            throw std::invalid_argument("StructureSpec: basis element has wrong size");
        double worst = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i + 1; j < dim; ++j)
                worst = std::max(worst, std::abs(b(i, j) - b(j, i)));
        if (worst > 1e-12 * (1.0 + max_abs(b)))
            throw std::invalid_argument("StructureSpec: basis element not symmetric");
    }
    // Linear independence via the rank of the vectorized family.
    Matrix vecs(basis.size(), dim * dim);
    for (std::size_t k = 0; k < basis.size(); ++k)
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) vecs(k, i * dim + j) = basis[k](i, j);
    if (rank_with_tolerance(vecs, cfg).rank != basis.size())
        throw std::invalid_argument("StructureSpec: basis elements are linearly dependent");
}

std::optional<SearchResult> search_phi(const DatasetCollection& coll, const StructureSpec& spec,
                                       const ProblemDims& dims, const SearchOptions& opts,
                                       const ToleranceConfig& cfg) {
    cfg.validate();
    dims.validate();
    spec.validate(cfg);
    if (spec.input_dim != coll.input_dim() || spec.output_dim != coll.output_dim())
        throw std::invalid_argument("search_phi: structure dimensions mismatch the data");
    if (spec.window != dims.window)
        throw std::invalid_argument("search_phi: structure window mismatches the problem");

    const PreparedVerifier verifier(coll, dims, cfg);
    const Matrix& range = verifier.spanned_range();
    if (range.cols() == 0) throw DegenerateDataError();

    const std::size_t k = spec.basis.size();
    std::vector<Matrix> restricted;
    restricted.reserve(k);
    for (const Matrix& element : spec.basis)
        restricted.push_back(
            congruence(kron_identity_left(dims.horizon, element), range));
    const std::size_t r = range.cols();
    const std::size_t d = (spec.window + 1) * (spec.input_dim + spec.output_dim);

    const auto combine = [&](const std::vector<Matrix>& parts, const std::vector<double>& c,
                             std::size_t n) {
        Matrix out(n, n);
        for (std::size_t e = 0; e < parts.size(); ++e)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) out(i, j) += c[e] * parts[e](i, j);
        return out;
    };

    std::vector<double> c(k, 1.0 / std::sqrt(static_cast<double>(k)));
    std::vector<double> best_c = c;
    double best_f = -std::numeric_limits<double>::infinity();
    std::size_t used = 0;

    for (std::size_t t = 0; t < opts.iterations; ++t) {
        const SymEigenResult cond = sym_eigen(combine(restricted, c, r));
        double f = cond.values.front();
        bool condition_active = true;

        SymEigenResult phi_eig;
        if (spec.require_phi_pd) {
            phi_eig = sym_eigen(combine(spec.basis, c, d));
            if (phi_eig.values.front() < f) {
                f = phi_eig.values.front();
                condition_active = false;
            }
        }
        if (f > best_f) {
            best_f = f;
            best_c = c;
        }
        used = t + 1;

        // Supergradient of the active smallest eigenvalue: v -> v' X_i v.
        std::vector<double> g(k, 0.0);
        if (condition_active) {
            const std::vector<double> v = cond.vectors.column(0);
            for (std::size_t e = 0; e < k; ++e) {
                double acc = 0.0;
                for (std::size_t i = 0; i < r; ++i) {
                    double row = 0.0;
                    for (std::size_t j = 0; j < r; ++j) row += restricted[e](i, j) * v[j];
                    acc += v[i] * row;
                }
                g[e] = acc;
            }
        } else {
            const std::vector<double> w = phi_eig.vectors.column(0);
            for (std::size_t e = 0; e < k; ++e) {
                double acc = 0.0;
                for (std::size_t i = 0; i < d; ++i) {
                    double row = 0.0;
                    for (std::size_t j = 0; j < d; ++j) row += spec.basis[e](i, j) * w[j];
                    acc += w[i] * row;
                }
                g[e] = acc;
            }
        }

        const double step = opts.step0 / std::sqrt(static_cast<double>(t + 1));
        double norm = 0.0;
        std::vector<double> next(k);
        for (std::size_t e = 0; e < k; ++e) {
            next[e] = c[e] + step * g[e];
            norm += next[e] * next[e];
        }
        norm = std::sqrt(norm);
        if (norm > 1e-15)
            for (std::size_t e = 0; e < k; ++e) c[e] = next[e] / norm;
    }

    if (!(best_f > 0.0)) return std::nullopt;

    SupplyForm phi;
    phi.window = spec.window;
    phi.input_dim = spec.input_dim;
    phi.output_dim = spec.output_dim;
    phi.phi = combine(spec.basis, best_c, d);
    phi.phi = symmetrized(phi.phi);

    // Independent certification of both sides.
    const VerificationReport check = verifier.test(phi);
    if (!check.verdict) return std::nullopt;
    const PsdResult phi_psd = is_psd(phi.phi, cfg);
    if (spec.require_phi_pd && !phi_psd.verdict) return std::nullopt;

    SearchResult out;
    out.phi = phi;
    out.coefficients = best_c;
    out.margin_condition = check.lambda_min_effective;
    out.margin_phi = phi_psd.margin;
    out.objective = best_f;
    out.iterations = used;
    return out;
}

}  // namespace qsr
