// Command-line front end: data simulation, excitation checking, dissipativity
// verification and supply-rate search over CSV trajectory files.
//
// Exit codes: 0 success/verified, 1 verified-false or nothing found,
// 2 precondition failure, 3 I/O or format error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qsr/io.hpp"
#include "qsr/lti.hpp"
#include "qsr/search.hpp"
#include "qsr/supply.hpp"
#include "qsr/verify.hpp"

namespace {

constexpr int kExitVerified = 0;
constexpr int kExitFalse = 1;
constexpr int kExitPrecondition = 2;
constexpr int kExitIo = 3;

struct CommonOptions {
    std::vector<std::string> data_files;
    std::size_t horizon = 0;
    std::size_t window = 0;
    std::size_t zero_prefix = 0;
    std::size_t order_bound = 1;
    std::string supply = "passivity";
    double gamma = 1.0;
    double sample_time = 0.005;
    qsr::ToleranceConfig tolerances;
};

void add_tolerance_flags(CLI::App* cmd, qsr::ToleranceConfig& cfg) {
    cmd->add_option("--rank-tol", cfg.rank_rel_tol, "Relative rank threshold");
    cmd->add_option("--psd-tol", cfg.psd_abs_tol, "PSD slack");
    cmd->add_option("--residual-tol", cfg.residual_tol, "Admissibility residual tolerance");
}

void add_data_flags(CLI::App* cmd, CommonOptions& opt, bool with_prefix) {
    cmd->add_option("--data", opt.data_files, "Trajectory CSV files, one per shot")
        ->required()
        ->expected(-1);
    cmd->add_option("-L,--horizon", opt.horizon, "Dissipativity horizon L")->required();
    cmd->add_option("-N,--window", opt.window, "Supply window N")->required();
    if (with_prefix)
        cmd->add_option("--nu", opt.zero_prefix, "Zero-prefix length nu")->required();
    cmd->add_option("--n-max", opt.order_bound, "Assumed upper bound on the plant order")
        ->required();
    cmd->add_option("--dt", opt.sample_time, "Sample time, label only (default 0.005)");
    add_tolerance_flags(cmd, opt.tolerances);
}

qsr::DatasetCollection load_collection(const std::vector<std::string>& files) {
    std::vector<qsr::Trajectory> shots;
    shots.reserve(files.size());
    for (const auto& file : files) shots.push_back(qsr::read_trajectory_csv(file));
    return qsr::DatasetCollection(std::move(shots));
}

qsr::SupplyForm resolve_supply(const CommonOptions& opt, std::size_t m, std::size_t p) {
    if (opt.supply == "passivity") return qsr::preset_passivity(m);
    if (opt.supply == "velocity" || opt.supply == "velocity-passivity")
        return qsr::preset_velocity_passivity(m);
    if (opt.supply == "l2" || opt.supply == "l2-gain")
        return qsr::preset_l2_gain(opt.gamma, m, p);
    if (std::filesystem::exists(opt.supply)) return qsr::read_supply_json(opt.supply);
    throw qsr::ParseError("unknown supply preset or missing file: " + opt.supply);
}

int emit_report(const qsr::VerificationReport& rep) {
    std::cout << qsr::to_json(rep) << "\n";
    std::cerr << (rep.verdict ? "verified" : "not verified")
              << ", lambda_min=" << qsr::format_double(rep.lambda_min) << "\n";
    return rep.verdict ? kExitVerified : kExitFalse;
}

int run_check_pe(const CommonOptions& opt, std::size_t order_override, bool joint) {
    const auto coll = load_collection(opt.data_files);
    const std::size_t order = order_override > 0
                                  ? order_override
                                  : opt.horizon + opt.window + opt.order_bound;
    const auto rep = qsr::check_collective_pe(coll, order, !joint, opt.tolerances);
    std::cout << qsr::to_json(rep) << "\n";
    std::cerr << "collective excitation at order " << order << ": "
              << (rep.verdict ? "pass" : "fail") << " (rank " << rep.rank << "/" << rep.required
              << ")\n";
    return rep.verdict ? kExitVerified : kExitFalse;
}

int run_verify(const CommonOptions& opt) {
    const auto coll = load_collection(opt.data_files);
    const auto form = resolve_supply(opt, coll.input_dim(), coll.output_dim());
    const qsr::ProblemDims dims{opt.horizon, opt.window, opt.zero_prefix, opt.order_bound};
    return emit_report(qsr::verify_dissipativity(coll, form, dims, opt.tolerances));
}

int run_sweep(const CommonOptions& opt, std::size_t nu_lo, std::size_t nu_hi) {
    const auto coll = load_collection(opt.data_files);
    const auto form = resolve_supply(opt, coll.input_dim(), coll.output_dim());
    const std::size_t lo = nu_lo > 0 ? nu_lo : opt.order_bound;
    const std::size_t hi = nu_hi > 0 ? nu_hi : opt.horizon - 1;
    const auto sweep =
        qsr::sweep_nu(coll, form, opt.horizon, opt.window, lo, hi, opt.order_bound,
                      opt.tolerances);
    std::cout << qsr::to_json(sweep) << "\n";
    bool all = true;
    for (const auto& rep : sweep.reports) all = all && rep.verdict;
    std::cerr << sweep.reports.size() << " prefixes, " << (all ? "all verified" : "not all verified")
              << ", monotone=" << (sweep.monotone ? "true" : "false") << "\n";
    if (!sweep.monotone)
        std::cerr << "WARNING: a verified prefix was followed by an unverified larger one; "
                     "this violates the verifier's own guarantee, please report it\n";
    return all ? kExitVerified : kExitFalse;
}

int run_estimate(const CommonOptions& opt, const std::string& family_name, double lo, double hi,
                 double tol_theta) {
    const auto coll = load_collection(opt.data_files);
    qsr::ParametricFamily family;
    if (family_name == "l2-gain")
        family = qsr::l2_gain_family(coll.input_dim(), coll.output_dim());
    else if (family_name == "input-passivity")
        family = qsr::input_passivity_family(coll.input_dim());
    else
        throw qsr::ParseError("unknown family: " + family_name);
    const qsr::ProblemDims dims{opt.horizon, opt.window, opt.zero_prefix, opt.order_bound};
    const auto result =
        qsr::bisect_parameter(coll, family, dims, lo, hi, tol_theta, opt.tolerances);
    std::cout << qsr::to_json(result) << "\n";
    std::cerr << family.name << " estimate: " << qsr::format_double(result.theta_star) << "\n";
    return kExitVerified;
}

int run_search(const CommonOptions& opt, const std::string& structure_file, std::size_t iters,
               double step0) {
    const auto coll = load_collection(opt.data_files);
    auto spec = qsr::read_structure_json(structure_file);
    const qsr::ProblemDims dims{opt.horizon, opt.window, opt.zero_prefix, opt.order_bound};
    const qsr::SearchOptions opts{iters, step0};
    const auto result = qsr::search_phi(coll, spec, dims, opts, opt.tolerances);
    if (!result) {
        std::cout << "{\"found\":false}\n";
        std::cerr << "no feasible supply form found\n";
        return kExitFalse;
    }
    std::string json = "{\"found\":true,\"phi\":" + qsr::supply_to_json(result->phi);
    json += ",\"margins\":{\"condition\":" + qsr::format_double(result->margin_condition);
    json += ",\"phi\":" + qsr::format_double(result->margin_phi) + "}";
    json += ",\"coefficients\":[";
    for (std::size_t i = 0; i < result->coefficients.size(); ++i) {
        if (i > 0) json += ",";
        json += qsr::format_double(result->coefficients[i]);
    }
    json += "],\"iterations\":" + std::to_string(result->iterations) + "}";
    std::cout << json << "\n";
    std::cerr << "feasible supply found, condition margin "
              << qsr::format_double(result->margin_condition) << "\n";
    return kExitVerified;
}

int run_simulate(const std::string& plant_file, std::size_t shots,
                 std::vector<std::size_t> lengths, std::uint64_t seed, double stddev, double mean,
                 const std::string& x0_policy, double x0_stddev, const std::string& out_dir) {
    const auto sys = qsr::read_plant_json(plant_file);
    if (lengths.size() == 1 && shots > 1) lengths.assign(shots, lengths.front());
    qsr::InitialStatePolicy init = qsr::InitialStatePolicy::zero();
    if (x0_policy == "gaussian")
        init = qsr::InitialStatePolicy::gaussian(x0_stddev);
    else if (x0_policy != "zero")
        throw qsr::ParseError("unknown initial-state policy: " + x0_policy);
    const auto coll = qsr::generate_pe_data(sys, shots, lengths, {stddev, mean, seed}, init);

    std::filesystem::create_directories(out_dir);
    for (std::size_t i = 0; i < coll.shot_count(); ++i) {
        const auto path = std::filesystem::path(out_dir) / ("shot_" + std::to_string(i) + ".csv");
        qsr::write_trajectory_csv(path, coll.shot(i));
        std::cerr << "wrote " << path.string() << " (" << coll.shot(i).raw_length()
                  << " samples)\n";
    }
    return kExitVerified;
}

int run_report(const CommonOptions& opt, const std::string& out_dir) {
    const auto coll = load_collection(opt.data_files);
    const auto form = resolve_supply(opt, coll.input_dim(), coll.output_dim());
    if (out_dir.empty() && coll.shot_count() > 1)
        throw qsr::ParseError("multiple shots: an output directory is required");
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

    for (std::size_t i = 0; i < coll.shot_count(); ++i) {
        const auto curve = qsr::cumulative_supply(coll.shot(i), form);
        std::string text = "T_f,upsilon\n";
        for (std::size_t k = 0; k < curve.size(); ++k)
            text += std::to_string(k) + "," + qsr::format_double(curve[k]) + "\n";
        if (out_dir.empty()) {
            std::cout << text;
        } else {
            const auto stem = std::filesystem::path(opt.data_files[i]).stem().string();
            const auto path = std::filesystem::path(out_dir) / ("upsilon_" + stem + ".csv");
            std::ofstream out(path);
            if (!out) throw qsr::ParseError("cannot write " + path.string());
            out << text;
            std::cerr << "wrote " << path.string() << "\n";
        }
    }
    return kExitVerified;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Data-driven dissipativity verification from multi-shot input-output records"};
    app.require_subcommand(1);

    CommonOptions opt;

    auto* check_pe = app.add_subcommand("check-pe", "Collective persistent excitation test");
    std::size_t order_override = 0;
    bool joint = false;
    add_data_flags(check_pe, opt, false);
    check_pe->add_option("--order", order_override,
                         "Excitation order (default: L + N + n_max)");
    check_pe->add_flag("--joint", joint, "Test stacked input-output samples instead of inputs");

    auto* verify = app.add_subcommand("verify", "Dissipativity verification at one prefix");
    add_data_flags(verify, opt, true);
    verify->add_option("--supply", opt.supply,
                       "Supply preset (passivity, velocity, l2-gain) or JSON file");
    verify->add_option("--gamma", opt.gamma, "Gain for the l2-gain preset");

    auto* sweep = app.add_subcommand("sweep", "Verification swept over zero prefixes");
    std::size_t nu_lo = 0, nu_hi = 0;
    add_data_flags(sweep, opt, false);
    sweep->add_option("--nu-min", nu_lo, "Smallest prefix (default n_max)");
    sweep->add_option("--nu-max", nu_hi, "Largest prefix (default L-1)");
    sweep->add_option("--supply", opt.supply, "Supply preset or JSON file");
    sweep->add_option("--gamma", opt.gamma, "Gain for the l2-gain preset");

    auto* estimate = app.add_subcommand("estimate", "Bisect a monotone supply parameter");
    std::string family_name = "l2-gain";
    double theta_lo = 0.0, theta_hi = 1.0, tol_theta = 1e-3;
    add_data_flags(estimate, opt, true);
    estimate->add_option("--family", family_name, "Family: l2-gain or input-passivity");
    estimate->add_option("--theta-lo", theta_lo, "Bracket lower end");
    estimate->add_option("--theta-hi", theta_hi, "Bracket upper end (auto-expanded)");
    estimate->add_option("--tol-theta", tol_theta, "Bisection tolerance");

    auto* search = app.add_subcommand("search", "Search a structured family for a feasible form");
    std::string structure_file;
    std::size_t iters = 2000;
    double step0 = 0.1;
    add_data_flags(search, opt, true);
    search->add_option("--structure", structure_file, "StructureSpec JSON file")->required();
    search->add_option("--iters", iters, "Ascent iterations");
    search->add_option("--step0", step0, "Initial step size");

    auto* simulate = app.add_subcommand("simulate", "Generate seeded multi-shot data");
    std::string plant_file, out_dir = ".", x0_policy = "zero";
    std::size_t shots = 1;
    std::vector<std::size_t> lengths;
    std::uint64_t seed = 0;
    double stddev = 0.05, mean = 0.0, x0_stddev = 0.1, dt = 0.005;
    simulate->add_option("--plant", plant_file, "Plant JSON file")->required();
    simulate->add_option("--shots", shots, "Number of shots")->required();
    simulate->add_option("--lengths", lengths, "Samples per shot (one value or one per shot)")
        ->required()
        ->delimiter(',');
    simulate->add_option("--seed", seed, "Base seed; shot i uses seed + i");
    simulate->add_option("--stddev", stddev, "Excitation standard deviation (default 0.05)");
    simulate->add_option("--mean", mean, "Excitation mean (default 0)");
    simulate->add_option("--x0", x0_policy, "Initial state policy: zero or gaussian");
    simulate->add_option("--x0-stddev", x0_stddev, "Initial state spread for gaussian policy");
    simulate->add_option("--dt", dt, "Sample time, label only (default 0.005)");
    simulate->add_option("--out", out_dir, "Output directory");

    auto* report = app.add_subcommand("report", "Cumulative supply curves per shot");
    std::string report_out;
    add_data_flags(report, opt, false);
    report->add_option("--supply", opt.supply, "Supply preset or JSON file");
    report->add_option("--gamma", opt.gamma, "Gain for the l2-gain preset");
    report->add_option("--out", report_out, "Output directory (required for several shots)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitIo;
    }

    try {
        if (check_pe->parsed()) return run_check_pe(opt, order_override, joint);
        if (verify->parsed()) return run_verify(opt);
        if (sweep->parsed()) return run_sweep(opt, nu_lo, nu_hi);
        if (estimate->parsed())
            return run_estimate(opt, family_name, theta_lo, theta_hi, tol_theta);
        if (search->parsed()) return run_search(opt, structure_file, iters, step0);
        if (simulate->parsed())
            return run_simulate(plant_file, shots, lengths, seed, stddev, mean, x0_policy,
                                x0_stddev, out_dir);
        if (report->parsed()) return run_report(opt, report_out);
    } catch (const qsr::PreconditionError& e) {
        std::cout << "{\"error\":\"preconditions failed\",\"precondition\":"
                  << qsr::to_json(e.report) << "}\n";
        std::cerr << e.what() << "\n";
        return kExitPrecondition;
    } catch (const qsr::ExcitationError& e) {
        std::cout << "{\"error\":\"not collectively persistently exciting\",\"pe\":"
                  << qsr::to_json(e.report) << "}\n";
        std::cerr << e.what() << "\n";
        return kExitPrecondition;
    } catch (const qsr::DegenerateDataError& e) {
        std::cout << "{\"error\":\"degenerate data: vacuous condition\"}\n";
        std::cerr << e.what() << "\n";
        return kExitPrecondition;
    } catch (const qsr::UnboundedParameterError& e) {
        std::cout << "{\"error\":\"unbounded above\"}\n";
        std::cerr << e.what() << "\n";
        return kExitFalse;
    } catch (const qsr::ParseError& e) {
        std::cerr << "error: " << e.what();
        if (e.row > 0) std::cerr << " (row " << e.row << ", column " << e.column << ")";
        std::cerr << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitIo;
}
