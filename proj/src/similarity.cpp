#include "stopgen/similarity.hpp"

#include <cctype>
#include <cmath>
#include <ostream>

#include "stopgen/csv.hpp"

namespace stopgen {

namespace {

constexpr double kCustomMassTolerance = 1e-9;

void check_unit_interval(double s, const char* what) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::out_of_range(std::string(what) + " outside [0,1]");
}

// Mass of the linear piece starting at `a` over a run of length t.
double segment_mass(const Knot& a, const Knot& b, double t) {
  const double slope = (b.density - a.density) / (b.s - a.s);
  return a.density * t + 0.5 * slope * t * t;
}

double custom_cdf(const SimilaritySpec& spec, double s) {
  const auto& knots = spec.knots();
  const auto& cumulative = spec.cumulative();
  if (s >= 1.0) return 1.0;
  auto upper = std::upper_bound(knots.begin(), knots.end(), s,
                                [](double value, const Knot& knot) { return value < knot.s; });
  const std::size_t seg = static_cast<std::size_t>(std::distance(knots.begin(), upper)) - 1;
  const double value = cumulative[seg] + segment_mass(knots[seg], knots[seg + 1], s - knots[seg].s);
  return std::clamp(value, 0.0, 1.0);
}

double custom_inverse(const SimilaritySpec& spec, double u) {
  const auto& knots = spec.knots();
  const auto& cumulative = spec.cumulative();
  if (u <= 0.0) {
    // Smallest s with H(s) >= 0 is 0.
    return 0.0;
  }
  // First segment whose cumulative end reaches u.
  std::size_t seg = 0;
  while (seg + 2 < knots.size() && cumulative[seg + 1] < u) ++seg;
  const Knot& a = knots[seg];
  const Knot& b = knots[seg + 1];
  const double width = b.s - a.s;
  const double slope = (b.density - a.density) / width;
  const double q = u - cumulative[seg];
  // Root of a t + slope t^2 / 2 = q, written to stay stable for slope -> 0.
  const double disc = std::max(0.0, a.density * a.density + 2.0 * slope * q);
  const double denom = a.density + std::sqrt(disc);
  double t = denom > 0.0 ? 2.0 * q / denom : width;
  t = std::clamp(t, 0.0, width);
  return std::clamp(a.s + t, 0.0, 1.0);
}

}  // namespace

SimilaritySpec SimilaritySpec::builtin(SimilarityKind kind) {
  if (kind == SimilarityKind::CustomPiecewiseLinear) {
    throw std::invalid_argument("custom similarity needs knots");
  }
  return SimilaritySpec(kind);
}

SimilaritySpec SimilaritySpec::custom(std::vector<Knot> knots) {
  if (knots.size() < 2) throw std::invalid_argument("custom density needs at least two knots");
  if (knots.front().s != 0.0 || knots.back().s != 1.0) {
    throw std::invalid_argument("custom density knots must span exactly [0,1]");
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i].density) || knots[i].density < 0.0) {
      throw std::invalid_argument("custom density must be finite and nonnegative at every knot");
    }
    if (i > 0 && !(knots[i].s > knots[i - 1].s)) {
      throw std::invalid_argument("custom density knots must strictly increase");
    }
  }
  SimilaritySpec spec(SimilarityKind::CustomPiecewiseLinear);
  spec.cumulative_.assign(knots.size(), 0.0);
  for (std::size_t i = 1; i < knots.size(); ++i) {
    const double width = knots[i].s - knots[i - 1].s;
    spec.cumulative_[i] = spec.cumulative_[i - 1] + 0.5 * width * (knots[i].density + knots[i - 1].density);
  }
  if (std::abs(spec.cumulative_.back() - 1.0) > kCustomMassTolerance) {
    throw std::invalid_argument("custom density integrates to " + csv::format(spec.cumulative_.back()) +
                                ", expected 1");
  }
  spec.knots_ = std::move(knots);
  return spec;
}

std::string_view similarity_name(SimilarityKind kind) {
  switch (kind) {
    case SimilarityKind::H1h: return "h1h";
    case SimilarityKind::H2h: return "h2h";
    case SimilarityKind::M1: return "h1m";
    case SimilarityKind::M2: return "h2m";
    case SimilarityKind::M3: return "h3m";
    case SimilarityKind::M4: return "h4m";
    case SimilarityKind::L1: return "h1l";
    case SimilarityKind::L2: return "h2l";
    case SimilarityKind::CustomPiecewiseLinear: return "custom";
  }
  throw std::logic_error("unknown similarity kind");
}

std::optional<SimilarityKind> parse_similarity_kind(std::string_view text) {
  std::string key(text);
  for (char& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (key == "custom") return SimilarityKind::CustomPiecewiseLinear;
  for (SimilarityKind kind : kBuiltinSimilarities) {
    const std::string_view name = similarity_name(kind);  // "h4m"
    const std::string level(1, name[2]);
    const std::string index(1, name[1]);
    // h4m, m4, hm4
    if (key == name || key == level + index || key == "h" + level + index) return kind;
  }
  return std::nullopt;
}

double cdf(const SimilaritySpec& spec, double s) {
  check_unit_interval(s, "similarity");
  switch (spec.kind()) {
    case SimilarityKind::H1h: return s >= 1.0 ? 1.0 : 0.0;
    case SimilarityKind::H2h: return s <= 0.5 ? 0.0 : (2.0 * s - 1.0) * (2.0 * s - 1.0);
    case SimilarityKind::M1: return s;
    case SimilarityKind::M2: return s * s;
    case SimilarityKind::M3: return 1.0 - (1.0 - s) * (1.0 - s);
    case SimilarityKind::M4: return s <= 0.5 ? 2.0 * s * s : 1.0 - 2.0 * (1.0 - s) * (1.0 - s);
    case SimilarityKind::L1: return 1.0;
    case SimilarityKind::L2: return s >= 0.5 ? 1.0 : 4.0 * s - 4.0 * s * s;
    case SimilarityKind::CustomPiecewiseLinear: return custom_cdf(spec, s);
  }
  throw std::logic_error("unknown similarity kind");
}

double inverse_cdf(const SimilaritySpec& spec, double u) {
  check_unit_interval(u, "probability");
  switch (spec.kind()) {
    case SimilarityKind::H1h: return 1.0;
    case SimilarityKind::H2h: return 0.5 * (1.0 + std::sqrt(u));
    case SimilarityKind::M1: return u;
    case SimilarityKind::M2: return std::sqrt(u);
    case SimilarityKind::M3: return 1.0 - std::sqrt(1.0 - u);
    case SimilarityKind::M4: return u <= 0.5 ? std::sqrt(0.5 * u) : 1.0 - std::sqrt(0.5 * (1.0 - u));
    case SimilarityKind::L1: return 0.0;
    case SimilarityKind::L2: return 0.5 * (1.0 - std::sqrt(1.0 - u));
    case SimilarityKind::CustomPiecewiseLinear: return custom_inverse(spec, u);
  }
  throw std::logic_error("unknown similarity kind");
}

double pdf(const SimilaritySpec& spec, double s) {
  check_unit_interval(s, "similarity");
  switch (spec.kind()) {
    case SimilarityKind::H1h:
    case SimilarityKind::L1: throw std::domain_error("point mass has no density");
    case SimilarityKind::H2h: return std::max(0.0, 8.0 * s - 4.0);
    case SimilarityKind::M1: return 1.0;
    case SimilarityKind::M2: return 2.0 * s;
    case SimilarityKind::M3: return 2.0 - 2.0 * s;
    case SimilarityKind::M4: return s <= 0.5 ? 4.0 * s : 4.0 - 4.0 * s;
    case SimilarityKind::L2: return std::max(0.0, 4.0 - 8.0 * s);
    case SimilarityKind::CustomPiecewiseLinear: {
      const auto& knots = spec.knots();
      auto upper = std::upper_bound(knots.begin(), knots.end(), s,
                                    [](double value, const Knot& knot) { return value < knot.s; });
      if (upper == knots.end()) return knots.back().density;
      const Knot& a = *(upper - 1);
      const Knot& b = *upper;
      return a.density + (b.density - a.density) * (s - a.s) / (b.s - a.s);
    }
  }
  throw std::logic_error("unknown similarity kind");
}

Eigen::VectorXd sample_similarities(const SimilaritySpec& spec, std::size_t k, Rng& rng) {
  if (k == 0) throw std::invalid_argument("need at least one similarity sample");
  Eigen::VectorXd values(static_cast<Eigen::Index>(k));
  for (Eigen::Index i = 0; i < values.size(); ++i) values(i) = inverse_cdf(spec, rng.uniform());
  return values;
}

Eigen::Index histogram_bin(double s, Eigen::Index bins) {
  if (!(s >= 0.0 && s <= 1.0)) return -1;
  const auto b = static_cast<Eigen::Index>(std::ceil(s * static_cast<double>(bins)));
  return std::clamp<Eigen::Index>(b, 1, bins) - 1;
}

HistogramEstimate estimate_density(std::span<const double> values, Eigen::Index bins) {
  if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  if (values.empty()) throw std::invalid_argument("cannot estimate a density from an empty sample");
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(bins);
  for (double s : values) {
    const Eigen::Index b = histogram_bin(s, bins);
    if (b >= 0) counts(b) += 1.0;
  }
  return HistogramEstimate{counts / static_cast<double>(values.size())};
}

HistogramEstimate estimate_density(const Eigen::VectorXd& values, Eigen::Index bins) {
  return estimate_density(std::span<const double>(values.data(), static_cast<std::size_t>(values.size())), bins);
}

Eigen::VectorXd analytic_bin_mass(const SimilaritySpec& spec, Eigen::Index bins) {
  Eigen::VectorXd mass(bins);
  double previous = 0.0;  // H(0^-)
  for (Eigen::Index b = 0; b < bins; ++b) {
    const double edge = b + 1 == bins ? 1.0 : static_cast<double>(b + 1) / static_cast<double>(bins);
    const double current = cdf(spec, edge);
    mass(b) = current - previous;
    previous = current;
  }
  return mass;
}

double ks_statistic(const SimilaritySpec& spec, std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double distance = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double model = cdf(spec, sorted[i]);
    distance = std::max({distance, static_cast<double>(i + 1) / n - model, model - static_cast<double>(i) / n});
  }
  return distance;
}

void write_histogram_csv(std::ostream& out, const HistogramEstimate& histogram) {
  csv::write_row(out, {"bin_low", "bin_high", "mass", "density"});
  const Eigen::VectorXd density = histogram.density();
  for (Eigen::Index b = 0; b < histogram.bins(); ++b) {
    csv::write_row(out, {csv::format(histogram.bin_low(b)), csv::format(histogram.bin_high(b)),
                         csv::format(histogram.mass(b)), csv::format(density(b))});
  }
}

std::vector<Knot> read_knots_csv(const std::string& path) {
  const csv::Table table = csv::read(path);
  const std::size_t s_col = table.column("s");
  const std::size_t d_col = table.column("density");
  std::vector<Knot> knots;
  knots.reserve(table.rows.size());
  for (const auto& row : table.rows) knots.push_back({csv::to_double(row[s_col]), csv::to_double(row[d_col])});
  return knots;
}

}  // namespace stopgen
