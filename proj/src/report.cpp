#include "fourmg/report.hpp"

#include <json.hpp>

namespace fourmg {

std::string report_to_json(const SolveReport& r) {
  nlohmann::json j;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["residuals"] = r.residuals;
  j["conv_factor"] = r.conv_factor;
  j["wall_ms"] = r.wall_ms;
  return j.dump();
}

} // namespace fourmg
