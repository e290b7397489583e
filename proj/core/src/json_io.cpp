#include "homc/json_io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace homc {

namespace {

template <class S>
nlohmann::json scalar_json(const S& v) {
  if constexpr (scalar_traits<S>::exact) {
    return v.str();
  } else {
    return v;
  }
}

template <class S>
nlohmann::json tensor_json_impl(const TransitionTensor<S>& P) {
  nlohmann::json cols = nlohmann::json::array();
  for (std::int64_t c = 0; c < P.columns(); ++c) {
    nlohmann::json col = nlohmann::json::array();
    for (int r = 0; r < P.states(); ++r) col.push_back(scalar_json(P.at(r, c)));
    cols.push_back(std::move(col));
  }
  return nlohmann::json{{"n", P.states()},
                        {"m", P.order()},
                        {"mode", scalar_traits<S>::mode_name},
                        {"columns", std::move(cols)}};
}

Rational rational_from_json(const nlohmann::json& v) {
  if (v.is_string()) return Rational::parse(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  throw std::invalid_argument("rational entries must be \"p/q\" strings or integers");
}

}  // namespace

nlohmann::json tensor_to_json(const TransitionTensor<double>& P) { return tensor_json_impl(P); }
nlohmann::json tensor_to_json(const TransitionTensor<Rational>& P) { return tensor_json_impl(P); }
nlohmann::json tensor_to_json(const AnyTensor& P) {
  return std::visit([](const auto& t) { return tensor_json_impl(t); }, P);
}

AnyTensor tensor_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  const int m = j.at("m").get<int>();
  const std::string mode = j.value("mode", "float");
  const auto& cols = j.at("columns");
  if (!cols.is_array()) throw std::invalid_argument("tensor json: 'columns' must be an array");
  const std::int64_t expected = column_count(n, m);
  if (static_cast<std::int64_t>(cols.size()) != expected) {
    throw std::invalid_argument("tensor json: expected " + std::to_string(expected) +
                                " columns, got " + std::to_string(cols.size()));
  }
  if (mode == "float") {
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(expected) * n);
    for (const auto& col : cols) {
      if (static_cast<int>(col.size()) != n) {
        throw std::invalid_argument("tensor json: column with wrong length");
      }
      for (const auto& v : col) data.push_back(v.get<double>());
    }
    return TransitionTensor<double>(n, m, std::move(data));
  }
  if (mode == "rational") {
    std::vector<Rational> data;
    data.reserve(static_cast<std::size_t>(expected) * n);
    for (const auto& col : cols) {
      if (static_cast<int>(col.size()) != n) {
        throw std::invalid_argument("tensor json: column with wrong length");
      }
      for (const auto& v : col) data.push_back(rational_from_json(v));
    }
    return TransitionTensor<Rational>(n, m, std::move(data));
  }
  throw std::invalid_argument("tensor json: mode must be 'float' or 'rational'");
}

TransitionTensor<double> as_double(const AnyTensor& P) {
  if (const auto* d = std::get_if<TransitionTensor<double>>(&P)) return *d;
  return to_double_tensor(std::get<TransitionTensor<Rational>>(P));
}

nlohmann::json vector_to_json(const ProbabilityVector<double>& x) {
  return nlohmann::json{{"x", x.entries()}};
}

nlohmann::json vector_to_json(const ProbabilityVector<Rational>& x) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Rational& v : x.entries()) arr.push_back(v.str());
  return nlohmann::json{{"x", std::move(arr)}};
}

ProbabilityVector<double> vector_from_json(const nlohmann::json& j) {
  const auto& arr = j.is_object() ? j.at("x") : j;
  std::vector<double> vals;
  for (const auto& v : arr) {
    vals.push_back(v.is_string() ? Rational::parse(v.get<std::string>()).to_double()
                                 : v.get<double>());
  }
  return ProbabilityVector<double>(std::move(vals), 1e-9);
}

nlohmann::json solution_set_to_json(const SolutionSet& s) {
  nlohmann::json j;
  j["kind"] = s.is_interval() ? "interval_all" : "finite";
  j["case"] = case_label(s.case_label);
  j["roots"] = s.roots;
  return j;
}

nlohmann::json solve_report_to_json(const SolveReport& r) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : r.points) points.push_back(p.entries());
  return nlohmann::json{{"points", std::move(points)},
                        {"residuals", r.residuals},
                        {"iterations", r.iterations},
                        {"seed", r.seed},
                        {"converged_starts", r.converged_starts},
                        {"total_starts", r.total_starts}};
}

namespace {
template <class S>
nlohmann::json universal_json_impl(const UniversalCheck<S>& c) {
  nlohmann::json j;
  j["universal"] = c.universal;
  if (!c.universal) {
    j["failing_row"] = c.failing_row;
    j["failing_class"] = c.failing_class;
    j["lhs"] = scalar_json(c.lhs);
    j["rhs"] = scalar_json(c.rhs);
  }
  return j;
}
}  // namespace

nlohmann::json universal_check_to_json(const UniversalCheck<double>& c) {
  return universal_json_impl(c);
}
nlohmann::json universal_check_to_json(const UniversalCheck<Rational>& c) {
  return universal_json_impl(c);
}

nlohmann::json violations_to_json(const std::vector<TensorViolation>& v, int n, int m) {
  nlohmann::json arr = nlohmann::json::array();
  for (const TensorViolation& viol : v) {
    const char* kind = viol.kind == TensorViolation::Kind::negative_entry ? "negative_entry"
                       : viol.kind == TensorViolation::Kind::entry_above_one ? "entry_above_one"
                                                                             : "column_sum";
    arr.push_back(nlohmann::json{{"kind", kind},
                                 {"row", viol.row},
                                 {"column", viol.column},
                                 {"magnitude", viol.magnitude},
                                 {"what", viol.describe(n, m)}});
  }
  return arr;
}

nlohmann::json irreducibility_to_json(const IrreducibilityResult& r) {
  nlohmann::json j;
  j["irreducible"] = r.irreducible;
  if (!r.irreducible) j["witness"] = r.witness;
  return j;
}

nlohmann::json construction_spec_to_json(const ConstructionSpec& spec) {
  return nlohmann::json{
      {"n", spec.n}, {"m", spec.m}, {"k", spec.k}, {"variant", variant_name(spec.variant)}};
}

ConstructionSpec construction_spec_from_json(const nlohmann::json& j) {
  ConstructionSpec spec;
  spec.n = j.at("n").get<int>();
  spec.m = j.value("m", 2);
  spec.k = j.at("k").get<int>();
  spec.variant = variant_from_name(j.at("variant").get<std::string>());
  return spec;
}

nlohmann::json description_to_json(const StationaryDescription& d) {
  nlohmann::json j;
  j["kind"] = description_kind_name(d.kind);
  if (!d.points.empty()) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : d.points) pts.push_back(p.entries());
    j["points"] = std::move(pts);
  }
  if (!d.face_indices.empty()) j["face_indices"] = d.face_indices;
  return j;
}

StationaryDescription description_from_json(const nlohmann::json& j) {
  StationaryDescription d;
  d.kind = description_kind_from_name(j.at("kind").get<std::string>());
  if (j.contains("points")) {
    for (const auto& p : j.at("points")) {
      std::vector<double> vals;
      for (const auto& v : p) {
        vals.push_back(v.is_string() ? Rational::parse(v.get<std::string>()).to_double()
                                     : v.get<double>());
      }
      d.points.emplace_back(std::move(vals), 1e-9);
    }
  }
  if (j.contains("face_indices")) d.face_indices = j.at("face_indices").get<std::vector<int>>();
  return d;
}

nlohmann::json verification_report_to_json(const VerificationReport& r) {
  nlohmann::json witnesses = nlohmann::json::array();
  for (const auto& w : r.witnesses) witnesses.push_back(w.entries());
  nlohmann::json j;
  j["verdict"] = r.pass ? "pass" : "fail";
  j["membership_max_residual"] = r.membership_max_residual;
  if (std::isfinite(r.exclusion_min_residual)) {
    j["exclusion_min_residual"] = r.exclusion_min_residual;
  }
  if (std::isfinite(r.midpoint_min_residual)) {
    j["midpoint_min_residual"] = r.midpoint_min_residual;
  }
  j["witnesses"] = std::move(witnesses);
  j["detail"] = r.detail;
  return j;
}

nlohmann::json probe_report_to_json(const ConjectureProbeReport& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.interior_points) pts.push_back(p.entries());
  return nlohmann::json{{"interior_points", std::move(pts)},
                        {"found_k_affinely_independent", r.found_k_affinely_independent},
                        {"face_sampled_fully_stationary", r.face_sampled_fully_stationary},
                        {"dense_max_residual", r.dense_max_residual},
                        {"summary", r.summary}};
}

nlohmann::json load_json(const std::string& path) {
  if (path == "-") {
    nlohmann::json j;
    std::cin >> j;
    return j;
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  nlohmann::json j;
  in >> j;
  return j;
}

void save_json(const nlohmann::json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
}

}  // namespace homc
