#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "homc/analysis.hpp"
#include "homc/characterize.hpp"
#include "homc/constructions.hpp"
#include "homc/solvers.hpp"
#include "homc/tensor.hpp"

namespace homc {

using AnyTensor = std::variant<TransitionTensor<double>, TransitionTensor<Rational>>;

// Canonical tensor format:
//   {"n": int, "m": int, "mode": "float"|"rational",
//    "columns": [[row values] ...]}   columns in lexicographic order,
// rational entries as "p/q" strings. Probability vectors: {"x": [...]}.

nlohmann::json tensor_to_json(const TransitionTensor<double>& P);
nlohmann::json tensor_to_json(const TransitionTensor<Rational>& P);
nlohmann::json tensor_to_json(const AnyTensor& P);
AnyTensor tensor_from_json(const nlohmann::json& j);

/// Whatever the stored mode, view the tensor in double precision.
TransitionTensor<double> as_double(const AnyTensor& P);

nlohmann::json vector_to_json(const ProbabilityVector<double>& x);
nlohmann::json vector_to_json(const ProbabilityVector<Rational>& x);
ProbabilityVector<double> vector_from_json(const nlohmann::json& j);

nlohmann::json solution_set_to_json(const SolutionSet& s);
nlohmann::json solve_report_to_json(const SolveReport& r);

nlohmann::json universal_check_to_json(const UniversalCheck<double>& c);
nlohmann::json universal_check_to_json(const UniversalCheck<Rational>& c);

nlohmann::json violations_to_json(const std::vector<TensorViolation>& v, int n, int m);
nlohmann::json irreducibility_to_json(const IrreducibilityResult& r);

nlohmann::json construction_spec_to_json(const ConstructionSpec& spec);
ConstructionSpec construction_spec_from_json(const nlohmann::json& j);

nlohmann::json description_to_json(const StationaryDescription& d);
StationaryDescription description_from_json(const nlohmann::json& j);

nlohmann::json verification_report_to_json(const VerificationReport& r);
nlohmann::json probe_report_to_json(const ConjectureProbeReport& r);

/// File helpers; path "-" means stdin/stdout.
nlohmann::json load_json(const std::string& path);
void save_json(const nlohmann::json& j, const std::string& path);

}  // namespace homc
