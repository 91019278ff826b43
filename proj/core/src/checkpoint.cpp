#include "caqs/checkpoint.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "caqs/error.hpp"

namespace caqs {
namespace {

// Shortest round-trip decimal for doubles.
std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void put_matrix(std::ostream& out, const std::string& key, const Eigen::MatrixXd& m) {
  out << key << ' ' << m.rows() << ' ' << m.cols();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << ' ' << fmt(m(r, c));
  }
  out << '\n';
}

void put_gaussian(std::ostream& out, const std::string& key, const RunningGaussian& g) {
  out << key << ' ' << g.count() << ' ' << fmt(g.mean()) << ' ' << fmt(g.m2()) << '\n';
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::istringstream expect(const std::string& key) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (line.empty() || line[0] == '#') continue;
      std::istringstream fields(line);
      std::string found;
      fields >> found;
      if (found != key) {
        throw InvalidInput("checkpoint line " + std::to_string(line_no_) + ": expected '" + key +
                           "', found '" + found + "'");
      }
      return fields;
    }
    throw InvalidInput("checkpoint truncated before '" + key + "'");
  }

  static double number(std::istringstream& fields) {
    std::string token;
    if (!(fields >> token)) throw InvalidInput("checkpoint: missing number");
    double v = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
      throw InvalidInput("checkpoint: bad number '" + token + "'");
    }
    return v;
  }

  template <typename T>
  static T integer(std::istringstream& fields) {
    long long v = 0;
    if (!(fields >> v) || v < 0) throw InvalidInput("checkpoint: bad integer");
    return static_cast<T>(v);
  }

  Eigen::MatrixXd matrix(const std::string& key) {
    auto fields = expect(key);
    const auto rows = integer<Eigen::Index>(fields);
    const auto cols = integer<Eigen::Index>(fields);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = number(fields);
    }
    return m;
  }

  RunningGaussian gaussian(const std::string& key) {
    auto fields = expect(key);
    const auto count = integer<std::size_t>(fields);
    const double mean = number(fields);
    const double m2 = number(fields);
    return RunningGaussian::from_state(count, mean, m2);
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

std::string_view kind_name(AttributeKind kind) {
  return kind == AttributeKind::object ? "object" : "person";
}

}  // namespace

void save_checkpoint(std::ostream& out, const Checkpoint& cp) {
  const MlrModel& m = cp.classifier;
  out << "caqs-checkpoint " << kCheckpointVersion << '\n';
  put_matrix(out, "mlr.theta", m.theta);
  out << "mlr.hyper " << fmt(m.lambda) << ' ' << fmt(m.alpha) << ' ' << fmt(m.alpha_decay) << ' '
      << m.epochs << ' ' << m.buffer_capacity << ' ' << m.flushes << '\n';
  out << "mlr.buffer " << m.buffer.size() << '\n';
  for (const LabeledExample& ex : m.buffer) {
    out << "example " << ex.label << ' ' << ex.features.size();
    for (Eigen::Index i = 0; i < ex.features.size(); ++i) out << ' ' << fmt(ex.features[i]);
    out << '\n';
  }

  const ContextModel& c = cp.context;
  out << "context.classes " << c.class_count << '\n';
  put_matrix(out, "context.F_a", c.activity_cooccurrence.counts());
  put_gaussian(out, "context.temporal", c.temporal);
  put_gaussian(out, "context.spatial", c.spatial);
  out << "context.link " << fmt(c.link.weights[0]) << ' ' << fmt(c.link.weights[1]) << ' '
      << fmt(c.link.weights[2]) << ' ' << c.link.trained_on << '\n';
  out << "context.attributes " << c.attributes.size() << '\n';
  for (const AttributeModel& a : c.attributes) {
    // Names are written last on the line so they may contain spaces.
    out << "attribute " << kind_name(a.schema.kind) << ' ' << a.schema.dim << ' '
        << a.schema.name << '\n';
    if (a.schema.kind == AttributeKind::object) {
      put_matrix(out, "F_c", a.cooccurrence.counts());
      put_gaussian(out, "displacement", a.displacement);
    } else {
      out << "bins " << a.binning.edges().size();
      for (double e : a.binning.edges()) out << ' ' << fmt(e);
      out << '\n';
      put_gaussian(out, "value", a.value);
      out << "per_class " << a.per_class.size() << '\n';
      for (const RunningGaussian& g : a.per_class) put_gaussian(out, "class", g);
    }
  }
  out << "end\n";
}

Checkpoint load_checkpoint(std::istream& in) {
  Reader r(in);
  Checkpoint cp;
  {
    auto fields = r.expect("caqs-checkpoint");
    int version = 0;
    if (!(fields >> version) || version != kCheckpointVersion) {
      throw InvalidInput("unsupported checkpoint version");
    }
  }
  MlrModel& m = cp.classifier;
  m.theta = r.matrix("mlr.theta");
  {
    auto fields = r.expect("mlr.hyper");
    m.lambda = Reader::number(fields);
    m.alpha = Reader::number(fields);
    m.alpha_decay = Reader::number(fields);
    m.epochs = Reader::integer<std::size_t>(fields);
    m.buffer_capacity = Reader::integer<std::size_t>(fields);
    m.flushes = Reader::integer<std::size_t>(fields);
  }
  {
    auto fields = r.expect("mlr.buffer");
    const auto count = Reader::integer<std::size_t>(fields);
    for (std::size_t i = 0; i < count; ++i) {
      auto ex = r.expect("example");
      LabeledExample e;
      e.label = Reader::integer<std::size_t>(ex);
      const auto dim = Reader::integer<Eigen::Index>(ex);
      e.features.resize(dim);
      for (Eigen::Index k = 0; k < dim; ++k) e.features[k] = Reader::number(ex);
      m.buffer.push_back(std::move(e));
    }
  }

  ContextModel& c = cp.context;
  {
    auto fields = r.expect("context.classes");
    c.class_count = Reader::integer<std::size_t>(fields);
  }
  c.activity_cooccurrence = CooccurrenceMatrix(r.matrix("context.F_a"));
  c.temporal = r.gaussian("context.temporal");
  c.spatial = r.gaussian("context.spatial");
  {
    auto fields = r.expect("context.link");
    for (int k = 0; k < 3; ++k) c.link.weights[k] = Reader::number(fields);
    c.link.trained_on = Reader::integer<std::size_t>(fields);
  }
  auto attr_fields = r.expect("context.attributes");
  const auto attr_count = Reader::integer<std::size_t>(attr_fields);
  for (std::size_t i = 0; i < attr_count; ++i) {
    auto fields = r.expect("attribute");
    AttributeModel a;
    std::string kind;
    fields >> kind;
    if (kind != "object" && kind != "person") throw InvalidInput("bad attribute kind");
    a.schema.kind = kind == "object" ? AttributeKind::object : AttributeKind::person;
    a.schema.dim = Reader::integer<std::size_t>(fields);
    fields >> std::ws;
    std::getline(fields, a.schema.name);
    if (a.schema.kind == AttributeKind::object) {
      a.cooccurrence = CooccurrenceMatrix(r.matrix("F_c"));
      a.displacement = r.gaussian("displacement");
    } else {
      auto bins = r.expect("bins");
      const auto count = Reader::integer<std::size_t>(bins);
      std::vector<double> edges(count);
      for (double& e : edges) e = Reader::number(bins);
      a.binning = BinningScheme(std::move(edges));
      a.value = r.gaussian("value");
      auto pc = r.expect("per_class");
      const auto classes = Reader::integer<std::size_t>(pc);
      for (std::size_t k = 0; k < classes; ++k) a.per_class.push_back(r.gaussian("class"));
    }
    c.attributes.push_back(std::move(a));
  }
  r.expect("end");
  return cp;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write checkpoint " + path.string());
  save_checkpoint(out, checkpoint);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read checkpoint " + path.string());
  return load_checkpoint(in);
}

}  // namespace caqs
