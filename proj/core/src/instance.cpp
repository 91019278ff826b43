#include "caqs/instance.hpp"

#include <cmath>
#include <string>

#include "caqs/error.hpp"

namespace caqs {

void validate_instance(const ActivityInstance& instance, std::size_t feature_dim,
                       const std::vector<AttributeSchema>& schemas) {
  const std::string where = "instance '" + instance.id + "': ";
  if (static_cast<std::size_t>(instance.features.size()) != feature_dim) {
    throw InvalidInput(where + "feature length " + std::to_string(instance.features.size()) +
                       " != model dimension " + std::to_string(feature_dim));
  }
  if (!instance.features.allFinite() || !instance.position.allFinite() ||
      !std::isfinite(instance.time)) {
    throw InvalidInput(where + "non-finite features or position");
  }
  for (const ContextObservation& obs : instance.context) {
    if (obs.attribute >= schemas.size()) {
      throw InvalidInput(where + "unknown attribute index " + std::to_string(obs.attribute));
    }
    const AttributeSchema& schema = schemas[obs.attribute];
    if (!obs.position.allFinite()) throw InvalidInput(where + "non-finite context position");
    if (schema.kind == AttributeKind::object) {
      if (!obs.pmf || obs.value) {
        throw InvalidInput(where + "object attribute '" + schema.name + "' needs a pmf only");
      }
      const Eigen::VectorXd& pmf = *obs.pmf;
      if (static_cast<std::size_t>(pmf.size()) != schema.dim) {
        throw InvalidInput(where + "pmf length mismatch for '" + schema.name + "'");
      }
      if (!pmf.allFinite() || pmf.minCoeff() < 0.0 || std::abs(pmf.sum() - 1.0) > 1e-9) {
        throw InvalidInput(where + "invalid pmf for '" + schema.name + "'");
      }
    } else {
      if (!obs.value || obs.pmf) {
        throw InvalidInput(where + "person attribute '" + schema.name + "' needs a value only");
      }
      if (!std::isfinite(*obs.value)) throw InvalidInput(where + "non-finite attribute value");
    }
  }
}

}  // namespace caqs
