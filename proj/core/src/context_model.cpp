#include "caqs/context_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "caqs/error.hpp"
#include "caqs/structure.hpp"

namespace caqs {

CooccurrenceMatrix::CooccurrenceMatrix(std::size_t rows, std::size_t cols, double fill)
    : counts_(Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(rows),
                                        static_cast<Eigen::Index>(cols), fill)) {
  if (fill < 0.0) throw InvalidInput("co-occurrence counts must be nonnegative");
}

CooccurrenceMatrix::CooccurrenceMatrix(Eigen::MatrixXd counts) : counts_(std::move(counts)) {
  if (counts_.size() > 0 && (!counts_.allFinite() || counts_.minCoeff() < 0.0)) {
    throw InvalidInput("co-occurrence counts must be finite and nonnegative");
  }
}

void CooccurrenceMatrix::add(std::size_t r, std::size_t c, double amount) {
  if (r >= rows() || c >= cols()) throw InvalidInput("co-occurrence index out of range");
  if (!(amount >= 0.0)) throw InvalidInput("co-occurrence increments must be nonnegative");
  counts_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) += amount;
}

BinningScheme::BinningScheme(std::vector<double> edges) : edges_(std::move(edges)) {
  if (edges_.size() < 2) throw InvalidInput("binning needs at least two edges");
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (!(edges_[i] > edges_[i - 1]) || !std::isfinite(edges_[i])) {
      throw InvalidInput("bin edges must be finite and strictly ascending");
    }
  }
}

BinningScheme BinningScheme::equal_width(double lo, double hi, std::size_t bins) {
  if (bins == 0) throw InvalidInput("bin count must be positive");
  if (!(hi > lo)) {
    // Degenerate training range; widen symmetrically.
    const double pad = std::max(1.0, std::abs(lo)) * 0.5;
    lo -= pad;
    hi += pad;
  }
  std::vector<double> edges(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) edges[i] = lo + width * static_cast<double>(i);
  edges.back() = hi;
  return BinningScheme(std::move(edges));
}

BinningScheme::Location BinningScheme::locate(double value) const {
  if (edges_.size() < 2) throw InvalidInput("empty binning scheme");
  if (value < edges_.front()) return {0, true};
  if (value > edges_.back()) return {bin_count() - 1, true};
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), value);
  const auto bin = static_cast<std::size_t>(std::distance(edges_.begin(), it)) - 1;
  return {std::min(bin, bin_count() - 1), false};
}

std::vector<AttributeSchema> ContextModel::schemas() const {
  std::vector<AttributeSchema> out;
  out.reserve(attributes.size());
  for (const AttributeModel& a : attributes) out.push_back(a.schema);
  return out;
}

ContextModel make_context_model(std::size_t class_count, std::vector<AttributeSchema> schemas,
                                const std::vector<BinningScheme>& person_binnings) {
  if (class_count == 0) throw InvalidInput("class count must be positive");
  ContextModel model;
  model.class_count = class_count;
  model.activity_cooccurrence = CooccurrenceMatrix::laplace(class_count, class_count);
  std::size_t next_binning = 0;
  for (AttributeSchema& schema : schemas) {
    AttributeModel attr;
    if (schema.kind == AttributeKind::person) {
      if (next_binning >= person_binnings.size()) {
        throw InvalidInput("missing binning for person attribute '" + schema.name + "'");
      }
      attr.binning = person_binnings[next_binning++];
      schema.dim = attr.binning.bin_count();
      attr.per_class.resize(class_count);
    } else {
      if (schema.dim == 0) throw InvalidInput("object attribute '" + schema.name + "' has dim 0");
      attr.cooccurrence = CooccurrenceMatrix::laplace(class_count, schema.dim);
    }
    attr.schema = std::move(schema);
    model.attributes.push_back(std::move(attr));
  }
  return model;
}

ContextModel update_context(ContextModel context, const ContextEvidence& evidence) {
  const std::size_t n = evidence.instances.size();
  const std::size_t q = context.class_count;
  if (evidence.labels.size() != n) throw InvalidInput("label count does not match batch size");
  if (static_cast<std::size_t>(evidence.adjacency.rows()) != n ||
      static_cast<std::size_t>(evidence.adjacency.cols()) != n) {
    throw InvalidInput("adjacency must be N x N");
  }
  if (!evidence.observation_values.empty() && evidence.observation_values.size() != n) {
    throw InvalidInput("observation values must cover the batch");
  }
  if (context.activity_cooccurrence.rows() != q || context.activity_cooccurrence.cols() != q) {
    throw InvalidInput("F_a must be q x q");
  }
  for (const auto& label : evidence.labels) {
    if (label && *label >= q) throw InvalidInput("label out of range");
  }

  for (std::size_t u = 0; u < n; ++u) {
    if (!evidence.labels[u]) continue;
    for (std::size_t v = 0; v < n; ++v) {
      const double adj = evidence.adjacency(static_cast<Eigen::Index>(u),
                                            static_cast<Eigen::Index>(v));
      if (adj == 0.0 || !evidence.labels[v]) continue;
      context.activity_cooccurrence.add(*evidence.labels[u], *evidence.labels[v], adj);
    }
  }

  // Relative positions of linked pairs.
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (evidence.adjacency(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) == 0.0) {
        continue;
      }
      const Eigen::Vector2d d = link_distance(evidence.instances[u], evidence.instances[v]);
      context.temporal.add(d[0] * d[0]);
      context.spatial.add(d[1] * d[1]);
    }
  }

  for (std::size_t u = 0; u < n; ++u) {
    if (!evidence.labels[u]) continue;
    const std::size_t cls = *evidence.labels[u];
    const ActivityInstance& inst = evidence.instances[u];
    for (std::size_t k = 0; k < inst.context.size(); ++k) {
      const ContextObservation& obs = inst.context[k];
      if (obs.attribute >= context.attributes.size()) throw InvalidInput("unknown attribute");
      AttributeModel& attr = context.attributes[obs.attribute];
      if (attr.schema.kind == AttributeKind::object) {
        if (!obs.pmf) throw InvalidInput("object observation without pmf");
        std::optional<std::size_t> value;
        if (!evidence.observation_values.empty() && k < evidence.observation_values[u].size()) {
          value = evidence.observation_values[u][k];
        }
        if (!value) {
          Eigen::Index best = 0;
          obs.pmf->maxCoeff(&best);
          value = static_cast<std::size_t>(best);
        }
        attr.cooccurrence.add(cls, *value, 1.0);
        attr.displacement.add((inst.position - obs.position).squaredNorm());
      } else {
        if (!obs.value) throw InvalidInput("person observation without value");
        attr.value.add(*obs.value);
        if (attr.per_class.size() != q) attr.per_class.resize(q);
        attr.per_class[cls].add(*obs.value);
      }
    }
  }
  return context;
}

}  // namespace caqs
