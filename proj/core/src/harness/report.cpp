#include "caqs/harness/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "caqs/error.hpp"

namespace caqs::harness {
namespace {

constexpr const char* kCurveHeader = "series,round,manual,manual_fraction,weak,accuracy";
constexpr const char* kSummaryHeader = "series,rounds,final_manual,final_manual_fraction,final_accuracy,area";

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

double fraction(const Series& s, const CurvePoint& p) {
  return s.train_size ? static_cast<double>(p.manual) / static_cast<double>(s.train_size) : 0.0;
}

// Trapezoid area under accuracy against manual fraction.
double area(const Series& s) {
  double total = 0.0;
  for (std::size_t i = 1; i < s.points.size(); ++i)
    total += 0.5 * (s.points[i].accuracy + s.points[i - 1].accuracy) *
             (fraction(s, s.points[i]) - fraction(s, s.points[i - 1]));
  return total;
}

}  // namespace

void write_curves(std::ostream& out, std::span<const Series> series) {
  out << kCurveHeader << '\n';
  for (const auto& s : series) {
    if (s.name.find_first_of(",\n") != std::string::npos)
      throw InvalidInput("series name may not contain ',' or newlines");
    for (const auto& p : s.points)
      out << s.name << ',' << p.round << ',' << p.manual << ',' << fixed(fraction(s, p)) << ','
          << p.weak << ',' << fixed(p.accuracy) << '\n';
  }
}

std::vector<Series> read_curves(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCurveHeader) throw InvalidInput("not a curve file");
  std::vector<Series> out;
  std::map<std::string, std::size_t> index;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string name, round, manual, frac, weak, acc;
    if (!std::getline(ss, name, ',') || !std::getline(ss, round, ',') ||
        !std::getline(ss, manual, ',') || !std::getline(ss, frac, ',') ||
        !std::getline(ss, weak, ',') || !std::getline(ss, acc))
      throw InvalidInput("curve line " + std::to_string(number) + ": expected 6 fields");
    auto [it, inserted] = index.emplace(name, out.size());
    if (inserted) out.push_back({name, 0, {}});
    Series& s = out[it->second];
    CurvePoint p;
    try {
      p.round = std::stoull(round);
      p.manual = std::stoull(manual);
      p.weak = std::stoull(weak);
      p.accuracy = std::stod(acc);
      const double f = std::stod(frac);
      if (f > 0.0 && s.train_size == 0)
        s.train_size = static_cast<std::size_t>(std::llround(static_cast<double>(p.manual) / f));
    } catch (const std::exception&) {
      throw InvalidInput("curve line " + std::to_string(number) + ": bad number");
    }
    s.points.push_back(p);
  }
  return out;
}

void emit_report(const std::filesystem::path& dir, std::span<const Series> series) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "curves.csv");
    if (!out) throw InvalidInput("cannot write " + (dir / "curves.csv").string());
    write_curves(out, series);
  }
  std::ofstream out(dir / "summary.csv");
  if (!out) throw InvalidInput("cannot write " + (dir / "summary.csv").string());
  out << kSummaryHeader << '\n';
  for (const auto& s : series) {
    if (s.points.empty()) continue;
    const auto& last = s.points.back();
    out << s.name << ',' << s.points.size() << ',' << last.manual << ',' << fixed(fraction(s, last))
        << ',' << fixed(last.accuracy) << ',' << fixed(area(s)) << '\n';
  }
}

double accuracy_at(const Series& series, double manual_fraction) {
  if (series.points.empty()) throw InvalidInput("empty curve");
  const auto& pts = series.points;
  if (manual_fraction <= fraction(series, pts.front())) return pts.front().accuracy;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double x0 = fraction(series, pts[i - 1]);
    const double x1 = fraction(series, pts[i]);
    if (manual_fraction <= x1) {
      if (x1 == x0) return pts[i].accuracy;
      const double w = (manual_fraction - x0) / (x1 - x0);
      return (1.0 - w) * pts[i - 1].accuracy + w * pts[i].accuracy;
    }
  }
  return pts.back().accuracy;
}

Series mean_series(std::span<const Series> runs, const std::string& name) {
  if (runs.empty()) throw InvalidInput("no runs to average");
  Series out{name, runs.front().train_size, runs.front().points};
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].points.size() != out.points.size() || runs[r].train_size != out.train_size)
      throw InvalidInput("runs do not share a curve grid");
    for (std::size_t i = 0; i < out.points.size(); ++i) {
      out.points[i].accuracy += runs[r].points[i].accuracy;
      out.points[i].manual += runs[r].points[i].manual;
      out.points[i].weak += runs[r].points[i].weak;
    }
  }
  const double n = static_cast<double>(runs.size());
  for (auto& p : out.points) {
    p.accuracy /= n;
    p.manual = static_cast<std::size_t>(std::llround(static_cast<double>(p.manual) / n));
    p.weak = static_cast<std::size_t>(std::llround(static_cast<double>(p.weak) / n));
  }
  return out;
}

}  // namespace caqs::harness
