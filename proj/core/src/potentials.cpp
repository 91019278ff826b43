#include "caqs/potentials.hpp"

#include <string>

#include "caqs/error.hpp"

namespace caqs {
namespace {

const AttributeModel& attribute_of(const ContextObservation& obs, const ContextModel& context) {
  if (obs.attribute >= context.attributes.size()) {
    throw InvalidInput("unknown attribute index " + std::to_string(obs.attribute));
  }
  return context.attributes[obs.attribute];
}

BinningScheme::Location locate_value(const AttributeModel& attr, const ContextObservation& obs,
                                     std::size_t* out_of_range) {
  if (!obs.value) throw InvalidInput("person attribute '" + attr.schema.name + "' needs a value");
  const BinningScheme::Location loc = attr.binning.locate(*obs.value);
  if (loc.clamped && out_of_range) ++*out_of_range;
  return loc;
}

}  // namespace

Eigen::MatrixXd clamp_potential(Eigen::MatrixXd table) {
  return table.cwiseMax(kPotentialFloor);
}

Eigen::VectorXd activity_node_potential(const ActivityInstance& instance,
                                        const MlrModel& classifier) {
  return classify(classifier, instance.features);
}

Eigen::VectorXd context_node_potential(const ContextObservation& observation,
                                       const ContextModel& context, std::size_t* out_of_range) {
  const AttributeModel& attr = attribute_of(observation, context);
  if (attr.schema.kind == AttributeKind::object) {
    if (!observation.pmf) {
      throw InvalidInput("object attribute '" + attr.schema.name + "' needs a pmf");
    }
    if (static_cast<std::size_t>(observation.pmf->size()) != attr.dim()) {
      throw InvalidInput("pmf length does not match attribute '" + attr.schema.name + "'");
    }
    return *observation.pmf;
  }
  const BinningScheme::Location loc = locate_value(attr, observation, out_of_range);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(attr.dim()));
  out[static_cast<Eigen::Index>(loc.bin)] = attr.value.param().density(*observation.value);
  return out;
}

Eigen::VectorXd context_node_potential(std::span<const ContextObservation> observations,
                                       const ContextModel& context, std::size_t* out_of_range) {
  Eigen::Index total = 0;
  for (const ContextObservation& obs : observations) {
    total += static_cast<Eigen::Index>(attribute_of(obs, context).dim());
  }
  Eigen::VectorXd out(total);
  Eigen::Index offset = 0;
  for (const ContextObservation& obs : observations) {
    const Eigen::VectorXd part = context_node_potential(obs, context, out_of_range);
    out.segment(offset, part.size()) = part;
    offset += part.size();
  }
  return out;
}

Eigen::MatrixXd activity_activity_potential(const ActivityInstance& a, const ActivityInstance& b,
                                            const ContextModel& context) {
  const double dt2 = (a.time - b.time) * (a.time - b.time);
  const double ds2 = (a.position - b.position).squaredNorm();
  const double scale = context.temporal.param().density(dt2) * context.spatial.param().density(ds2);
  return clamp_potential(context.activity_cooccurrence.counts() * scale);
}

Eigen::MatrixXd activity_context_potential(const ActivityInstance& instance,
                                           const ContextObservation& observation,
                                           const ContextModel& context,
                                           std::size_t* out_of_range) {
  const AttributeModel& attr = attribute_of(observation, context);
  const auto q = static_cast<Eigen::Index>(context.class_count);
  if (attr.schema.kind == AttributeKind::object) {
    if (attr.cooccurrence.rows() != context.class_count || attr.cooccurrence.cols() != attr.dim()) {
      throw InvalidInput("F_c shape mismatch for attribute '" + attr.schema.name + "'");
    }
    const double ds2 = (instance.position - observation.position).squaredNorm();
    return clamp_potential(attr.cooccurrence.counts() * attr.displacement.param().density(ds2));
  }
  const BinningScheme::Location loc = locate_value(attr, observation, out_of_range);
  if (attr.per_class.size() != context.class_count) {
    throw InvalidInput("missing class-conditional Gaussians for '" + attr.schema.name + "'");
  }
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(q, static_cast<Eigen::Index>(attr.dim()));
  for (Eigen::Index a = 0; a < q; ++a) {
    table(a, static_cast<Eigen::Index>(loc.bin)) =
        attr.per_class[static_cast<std::size_t>(a)].param().density(*observation.value);
  }
  return clamp_potential(std::move(table));
}

Eigen::MatrixXd activity_context_potential(const ActivityInstance& instance,
                                           std::span<const ContextObservation> observations,
                                           const ContextModel& context,
                                           std::size_t* out_of_range) {
  Eigen::Index total = 0;
  for (const ContextObservation& obs : observations) {
    total += static_cast<Eigen::Index>(attribute_of(obs, context).dim());
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(context.class_count), total);
  Eigen::Index offset = 0;
  for (const ContextObservation& obs : observations) {
    const Eigen::MatrixXd block =
        activity_context_potential(instance, obs, context, out_of_range);
    out.middleCols(offset, block.cols()) = block;
    offset += block.cols();
  }
  return out;
}

}  // namespace caqs
