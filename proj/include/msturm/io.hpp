#pragma once

#include "msturm/problem.hpp"
#include "msturm/scan.hpp"

#include <json.hpp>

#include <string>

namespace msturm {

/// Problem file schema (JSON):
/// { "n": int, "g": [[...]], "R": {"kind": ...}, "Y": {"kind": ...},
///   "P": [[basis vectors]], "S_P": [[...]], "Q": optional, "S_Q": optional,
///   "tolerances": {"ode_steps", "rank_tol", "kernel_tol", "bisect_tol"} }
/// Curves carry "value" (constant), "coefficients" (polynomial, ascending
/// degree) or "samples" (uniform grid on [0,1]).
MorseSturmProblem problem_from_json(const nlohmann::json& j);
nlohmann::json problem_to_json(const MorseSturmProblem& problem);

MorseSturmProblem load_problem(const std::string& path);
void save_problem(const MorseSturmProblem& problem, const std::string& path);

nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const FocalReport& report);
nlohmann::json to_json(const IndexResult& result);
nlohmann::json to_json(const Inertia& inertia);
nlohmann::json to_json(const VerificationReport& report);
nlohmann::json scan_summary_json(const IndexScan& scan);

/// CSV with header "sigma,mu,mu0,nullity0", one row per grid point.
std::string scan_to_csv(const IndexScan& scan);

}  // namespace msturm
