#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "cylspec/eigensolve.hpp"
#include "cylspec/essential.hpp"
#include "cylspec/mild.hpp"
#include "cylspec/operator2d.hpp"
#include "cylspec/potential.hpp"
#include "cylspec/realness.hpp"

namespace cylspec {

using Json = nlohmann::json;

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
void write_json_file(const std::string& path, const Json& j);

Json complex_json(Complex z);
Json eigen_result_json(const EigenResult& res);
Json realness_json(const RealnessReport& rep);
Json decay_json(const DecayEstimate& est, bool pass);
Json gronwall_json(const GronwallReport& rep);
Json hypothesis_json(const HypothesisReport& rep);
Json essential_json(const EssentialSpectrumDescriptor& d);

// Equal-length columns, `%.17g` cells.
void write_csv(const std::string& path,
               const std::vector<std::string>& headers,
               const std::vector<std::vector<double>>& columns);

// Coordinate-format export of the assembled operator.
void write_matrix_market(const std::string& path, const DiscreteOperator& op);

// Complex-plane plot: one polyline path per sampled dispersion branch plus
// one circle marker per eigenvalue.
void write_svg_spectrum(const std::string& path,
                        const EssentialSpectrumDescriptor& d,
                        const std::vector<Complex>& eigenvalues);

// Semi-log decay plot: single polyline of log10(norm) against z.
void write_svg_decay(const std::string& path, std::span<const double> z,
                     std::span<const double> norms);

// Sampled potential with explicit limits, for external instances:
// {"x_length", "bc_x", "omega_dim", "x", "z", "values", "v_plus", "v_minus"}.
CylinderPotential read_potential_json(const std::string& path);
void write_potential_json(const std::string& path, const CylinderPotential& V);

}  // namespace cylspec
