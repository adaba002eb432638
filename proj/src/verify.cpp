#include "qsr/verify.hpp"

#include <cmath>
#include <cstdint>
#include <exception>
#include <stdexcept>

namespace qsr {

SelectionMatrix build_selection_matrix(const ProblemDims& dims, std::size_t m, std::size_t p) {
    // Only the structural constraints: the selector is well formed for any
    // prefix up to the horizon, including the prefix == horizon corner.
    if (dims.horizon < 1 || dims.zero_prefix < 1 || dims.zero_prefix > dims.horizon)
        throw std::invalid_argument(
            "build_selection_matrix: prefix must lie in [1, horizon]");
    if (m < 1 || p < 1)
        throw std::invalid_argument("build_selection_matrix: dimensions must be positive");
    const std::size_t d = m + p;
    const std::size_t window_len = d * (dims.window + 1);
    SelectionMatrix sel;
    sel.zero_prefix = dims.zero_prefix;
    sel.horizon = dims.horizon;
    sel.window = dims.window;
    sel.input_dim = m;
    sel.output_dim = p;
    sel.base = Matrix(dims.zero_prefix * d, dims.horizon * window_len);
    for (std::size_t b = 0; b < dims.zero_prefix; ++b)
        for (std::size_t r = 0; r < d; ++r) sel.base(b * d + r, b * window_len + r) = 1.0;
    return sel;
}

PreparedVerifier::PreparedVerifier(const DatasetCollection& coll, const ProblemDims& dims,
                                   const ToleranceConfig& cfg)
    : dims_(dims), cfg_(cfg), input_dim_(coll.input_dim()), output_dim_(coll.output_dim()) {
    cfg_.validate();
    dims_.validate();

    precondition_ = validate_data_hypotheses(coll, dims_);
    if (!precondition_.all_ok()) throw PreconditionError(precondition_);

    const std::size_t pe_order = dims_.horizon + dims_.window + dims_.order_bound;
    pe_ = check_collective_pe(coll, pe_order, true, cfg_);
    if (!pe_.verdict) throw ExcitationError(pe_);

    const MosaicHankel mosaic = build_mosaic(coll, dims_.horizon, dims_.window);
    const SelectionMatrix sel = build_selection_matrix(dims_, input_dim_, output_dim_);

    const Matrix selected = multiply(sel.base, mosaic.base);
    const Matrix basis = null_space_basis(selected, cfg_);
    null_space_dim_ = basis.cols();
    if (null_space_dim_ == 0) throw DegenerateDataError();

    spanned_ = multiply(mosaic.base, basis);
    range_ = orthonormal_range_basis(spanned_, cfg_);
}

VerificationReport PreparedVerifier::test(const SupplyForm& form) const {
    if (form.input_dim != input_dim_ || form.output_dim != output_dim_)
        throw std::invalid_argument("verify_dissipativity: supply dimensions mismatch the data");
    if (form.window != dims_.window)
        throw std::invalid_argument("verify_dissipativity: supply window mismatches the problem");

    VerificationReport rep;
    rep.zero_prefix = dims_.zero_prefix;
    rep.horizon = dims_.horizon;
    rep.window = dims_.window;
    rep.precondition = precondition_;
    rep.pe = pe_;
    rep.null_space_dim = null_space_dim_;

    const Matrix phi_l = kron_identity_left(dims_.horizon, form.phi);
    const PsdResult psd = is_psd(congruence(phi_l, spanned_), cfg_);
    rep.verdict = psd.verdict;
    rep.lambda_min = psd.margin;

    if (range_.cols() > 0) {
        const SymEigenResult eff = sym_eigen(congruence(phi_l, range_));
        rep.lambda_min_effective = eff.values.front();
        rep.effective_scale =
            std::max(std::abs(eff.values.front()), std::abs(eff.values.back()));
    }
    return rep;
}

VerificationReport verify_dissipativity(const DatasetCollection& coll, const SupplyForm& form,
                                   const ProblemDims& dims, const ToleranceConfig& cfg) {
    return PreparedVerifier(coll, dims, cfg).test(form);
}

SweepResult sweep_nu(const DatasetCollection& coll, const SupplyForm& form, std::size_t horizon,
                     std::size_t window, std::size_t nu_lo, std::size_t nu_hi,
                     std::size_t order_bound, const ToleranceConfig& cfg) {
    if (nu_lo > nu_hi) throw std::invalid_argument("sweep_nu: empty range");
    if (nu_lo < order_bound || nu_hi >= horizon)
        throw std::invalid_argument("sweep_nu: range must lie in [order_bound, horizon)");

    const std::size_t count = nu_hi - nu_lo + 1;
    std::vector<VerificationReport> reports(count);
    std::vector<std::exception_ptr> failures(count);

    const auto total = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic) if (count > 1)
    for (std::int64_t idx = 0; idx < total; ++idx) {
        const ProblemDims dims{horizon, window, nu_lo + static_cast<std::size_t>(idx),
                               order_bound};
        try {
            reports[static_cast<std::size_t>(idx)] = verify_dissipativity(coll, form, dims, cfg);
        } catch (...) {
            failures[static_cast<std::size_t>(idx)] = std::current_exception();
        }
    }
    for (const auto& failure : failures)
        if (failure) std::rethrow_exception(failure);

    SweepResult out;
    out.reports = std::move(reports);
    out.monotone = true;
    for (std::size_t i = 0; i < out.reports.size(); ++i)
        for (std::size_t j = i + 1; j < out.reports.size(); ++j)
            if (out.reports[i].verdict && !out.reports[j].verdict) out.monotone = false;
    return out;
}

}  // namespace qsr
