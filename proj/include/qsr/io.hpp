#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "qsr/hankel.hpp"
#include "qsr/lti.hpp"
#include "qsr/search.hpp"
#include "qsr/supply.hpp"
#include "qsr/trajectory.hpp"
#include "qsr/verify.hpp"

namespace qsr {

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t row = 0, std::size_t column = 0)
        : std::runtime_error(msg), row(row), column(column) {}
    std::size_t row;     // 1-based, header included; 0 when not applicable
    std::size_t column;  // 1-based; 0 when not applicable
};

// Trajectory CSV: header "k,u_1,...,u_m,y_1,...,y_p", then one row per
// sample with k counting up from 0.
Trajectory read_trajectory_csv(const std::filesystem::path& path);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

// Supply form JSON: {"N":..,"m":..,"p":..,"blocks":[{"i":..,"j":..,
// "matrix":[row-major (m+p)^2 values]}]}. Only upper-triangle blocks are
// stored.
SupplyForm read_supply_json(const std::filesystem::path& path);
std::string supply_to_json(const SupplyForm& form);

// Plant JSON: {"n":..,"m":..,"p":..,"A":[..],"B":[..],"C":[..],"D":[..]}
// with row-major arrays.
LtiSystem read_plant_json(const std::filesystem::path& path);
std::string plant_to_json(const LtiSystem& sys);

// Structure JSON: {"N":..,"m":..,"p":..,"require_phi_pd":..,
// "basis":[[row-major matrix]...]}.
StructureSpec read_structure_json(const std::filesystem::path& path);

// Doubles rendered with %.17g: round-trip exact and byte-stable.
std::string format_double(double value);

std::string to_json(const PeReport& rep);
std::string to_json(const PreconditionReport& rep);
std::string to_json(const VerificationReport& rep);
std::string to_json(const SweepResult& result);
std::string to_json(const BisectionResult& result);

}  // namespace qsr
