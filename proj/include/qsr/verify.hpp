#pragma once

#include <stdexcept>
#include <vector>

#include "qsr/decomp.hpp"
#include "qsr/hankel.hpp"
#include "qsr/supply.hpp"
#include "qsr/trajectory.hpp"

namespace qsr {

// Binary selector extracting the leading (m+p) entries of the first
// zero_prefix windows from a stacked window vector. Exactly
// zero_prefix*(m+p) entries are one.
struct SelectionMatrix {
    Matrix base;
    std::size_t zero_prefix = 0;
    std::size_t horizon = 0;
    std::size_t window = 0;
    std::size_t input_dim = 0;
    std::size_t output_dim = 0;
};

SelectionMatrix build_selection_matrix(const ProblemDims& dims, std::size_t m, std::size_t p);

struct VerificationReport {
    bool verdict = false;
    // Smallest eigenvalue of the test matrix U_perp' H' Phi_L H U_perp. The
    // coefficient kernel of H sits inside span(U_perp), so this value is
    // pinned at <= 0 whenever the data has redundant columns.
    double lambda_min = 0.0;
    // Margin of the same form restricted to the spanned trajectory subspace
    // range(H U_perp); strict certificates live here.
    double lambda_min_effective = 0.0;
    double effective_scale = 0.0;

    std::size_t zero_prefix = 0;
    std::size_t horizon = 0;
    std::size_t window = 0;
    std::size_t null_space_dim = 0;

    PeReport pe;
    PreconditionReport precondition;
};

struct PreconditionError : std::runtime_error {
    explicit PreconditionError(PreconditionReport rep)
        : std::runtime_error("verification preconditions failed"), report(rep) {}
    PreconditionReport report;
};

struct ExcitationError : std::runtime_error {
    explicit ExcitationError(PeReport rep)
        : std::runtime_error("data not collectively persistently exciting"), report(rep) {}
    PeReport report;
};

struct DegenerateDataError : std::runtime_error {
    DegenerateDataError() : std::runtime_error("degenerate data: vacuous condition") {}
};

// Data-driven dissipativity test: builds the windowed mosaic, restricts to
// coefficients with zero initial window heads, and checks positive
// semidefiniteness of the resulting supply form. Preconditions and collective
// excitation (at order horizon + window + order_bound) are re-checked and
// reported; failures raise the typed errors above.
VerificationReport verify_dissipativity(const DatasetCollection& coll, const SupplyForm& form,
                                   const ProblemDims& dims, const ToleranceConfig& cfg);

// The data-dependent half of the test, factored once: mosaic, excitation,
// null-space restriction and the spanned-subspace basis. test() then costs
// one congruence and one eigendecomposition per supply form, which is what
// parameter bisection and structured search iterate on.
class PreparedVerifier {
public:
    PreparedVerifier(const DatasetCollection& coll, const ProblemDims& dims,
                     const ToleranceConfig& cfg);

    VerificationReport test(const SupplyForm& form) const;

    // Orthonormal basis of the spanned trajectory subspace range(H U_perp).
    const Matrix& spanned_range() const { return range_; }
    const Matrix& spanned() const { return spanned_; }
    const ProblemDims& dims() const { return dims_; }

private:
    ProblemDims dims_;
    ToleranceConfig cfg_;
    std::size_t input_dim_ = 0;
    std::size_t output_dim_ = 0;
    PreconditionReport precondition_;
    PeReport pe_;
    std::size_t null_space_dim_ = 0;
    Matrix spanned_;
    Matrix range_;
};

struct SweepResult {
    std::vector<VerificationReport> reports;  // ascending zero_prefix
    bool monotone = false;
};

// One verification per zero_prefix in [lo, hi]; the audit flags any verified
// prefix followed by an unverified larger one.
SweepResult sweep_nu(const DatasetCollection& coll, const SupplyForm& form, std::size_t horizon,
                     std::size_t window, std::size_t nu_lo, std::size_t nu_hi,
                     std::size_t order_bound, const ToleranceConfig& cfg);

}  // namespace qsr
