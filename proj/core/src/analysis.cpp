#include "carenet/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "carenet/csv.hpp"
#include "carenet/errors.hpp"

namespace carenet {
namespace {

constexpr std::array<std::string_view, 9> kFieldNames{
    "S", "E", "A", "I", "H", "R", "documented_cumulative", "infected_cumulative", "vaccinated"};

double field_value(const GroupTally& g, SeriesField f) {
  switch (f) {
    case SeriesField::documented_cumulative: return static_cast<double>(g.documented);
    case SeriesField::infected_cumulative: return static_cast<double>(g.infected());
    case SeriesField::vaccinated: return static_cast<double>(g.vaccinated);
    default: return static_cast<double>(g.compartments[static_cast<std::size_t>(f)]);
  }
}

// Distance-two count using a caller-owned stamp buffer (stamp value = id + 1).
int second_neighbors_stamped(const ContactNetwork& net, NodeId id, std::vector<NodeId>& stamp,
                             std::vector<NodeId>& first) {
  const NodeId mark = id + 1;
  first.clear();
  stamp[id] = mark;
  for (const Contact& c : net.contacts(id)) {
    if (!net.is_active(id, c)) continue;
    stamp[c.neighbor] = mark;
    first.push_back(c.neighbor);
  }
  int count = 0;
  for (NodeId j : first) {
    for (const Contact& c : net.contacts(j)) {
      if (!net.is_active(j, c) || stamp[c.neighbor] == mark) continue;
      stamp[c.neighbor] = mark;
      ++count;
    }
  }
  return count;
}

}  // namespace

std::vector<double> sliding_mean_7day(std::span<const double> series) {
  const auto n = static_cast<std::ptrdiff_t>(series.size());
  std::vector<double> out(series.size());
  for (std::ptrdiff_t d = 0; d < n; ++d) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, d - 3);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, d + 3);
    double sum = 0.0;
    for (std::ptrdiff_t k = lo; k <= hi; ++k) sum += series[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(d)] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

double percentile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InputError("percentile of an empty sample");
  const double h = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::string_view to_string(SeriesField f) { return kFieldNames[static_cast<std::size_t>(f)]; }

SeriesField parse_series_field(std::string_view name) {
  for (std::size_t i = 0; i < kFieldNames.size(); ++i) {
    if (kFieldNames[i] == name) return static_cast<SeriesField>(i);
  }
  throw ConfigError("unknown series column '" + std::string(name) + "'");
}

std::string ColumnRef::name() const {
  return std::string(group ? to_string(*group) : "all") + "." + std::string(to_string(field));
}

std::vector<double> extract_column(const TrialSeries& series, const ColumnRef& column) {
  std::vector<double> out;
  out.reserve(series.days.size());
  for (const auto& row : series.days) {
    out.push_back(field_value(column.group ? row.group(*column.group) : row.total(), column.field));
  }
  return out;
}

AggregateSeries aggregate_trials(std::span<const TrialSeries> batch, const ColumnRef& column) {
  if (batch.empty()) throw InputError("cannot aggregate an empty batch");
  const std::size_t length = batch.front().days.size();
  std::vector<std::vector<double>> columns;
  for (const auto& s : batch) {
    if (s.days.size() != length) throw InputError("trial series differ in length");
    columns.push_back(extract_column(s, column));
  }
  AggregateSeries out;
  out.column = column.name();
  std::vector<double> values(batch.size());
  for (std::size_t d = 0; d < length; ++d) {
    for (std::size_t t = 0; t < batch.size(); ++t) values[t] = columns[t][d];
    std::sort(values.begin(), values.end());
    out.days.push_back(batch.front().days[d].day);
    out.mean.push_back(std::accumulate(values.begin(), values.end(), 0.0) /
                       static_cast<double>(values.size()));
    out.lower.push_back(percentile_sorted(values, 0.025));
    out.upper.push_back(percentile_sorted(values, 0.975));
    out.median.push_back(percentile_sorted(values, 0.5));
  }
  return out;
}

void write_aggregate_csv(std::ostream& out, std::span<const AggregateSeries> series,
                         std::size_t trials) {
  const bool band = trials > 1;
  out << "day,column,mean" << (band ? ",p2.5,p97.5" : "") << '\n';
  for (const auto& s : series) {
    for (std::size_t d = 0; d < s.days.size(); ++d) {
      out << s.days[d] << ',' << s.column << ',' << format_double(s.mean[d]);
      if (band) out << ',' << format_double(s.lower[d]) << ',' << format_double(s.upper[d]);
      out << '\n';
    }
  }
}

double edge_conductance(EdgeKind kind, Role a, Role b, const MaskPolicy& policy,
                        const TransmissionParams& params) {
  const int masks = mask_count(policy, kind, a, b);
  const double factor = masks == 0 ? 1.0 : masks == 1 ? std::sqrt(params.m) : params.m;
  return params.weights()(kind) * factor;
}

double strength(const Population& people, const ContactNetwork& net, NodeId id,
                const MaskPolicy& policy, const TransmissionParams& params) {
  double sum = 0.0;
  for (const Contact& c : net.contacts(id)) {
    if (!net.is_active(id, c)) continue;
    sum += edge_conductance(c.kind, people[id].role, people[c.neighbor].role, policy, params);
  }
  return sum;
}

double strength(const World& world, NodeId id) {
  return strength(world.people, world.network, id, world.masks, world.config.transmission);
}

int second_neighbor_count(const ContactNetwork& net, NodeId id) {
  std::vector<NodeId> stamp(net.node_count(), 0);
  std::vector<NodeId> first;
  return second_neighbors_stamped(net, id, stamp, first);
}

int active_degree(const ContactNetwork& net, NodeId id) {
  int k = 0;
  for (const Contact& c : net.contacts(id)) k += net.is_active(id, c) ? 1 : 0;
  return k;
}

std::vector<double> eigenvector_centrality(const Population& people, const ContactNetwork& net,
                                           const MaskPolicy& policy,
                                           const TransmissionParams& params, double tol,
                                           int max_iterations) {
  const std::size_t n = net.node_count();
  if (n == 0) throw InputError("eigenvector centrality of an empty network");

  // Compressed weighted adjacency of the active edges.
  std::vector<std::size_t> offset(n + 1, 0);
  std::vector<NodeId> target;
  std::vector<double> weight;
  for (std::size_t i = 0; i < n; ++i) {
    const auto id = static_cast<NodeId>(i);
    for (const Contact& c : net.contacts(id)) {
      if (!net.is_active(id, c)) continue;
      target.push_back(c.neighbor);
      weight.push_back(edge_conductance(c.kind, people[i].role, people[c.neighbor].role, policy, params));
    }
    offset[i + 1] = target.size();
  }

  std::vector<double> x(n, 1.0);
  std::vector<double> y(n);
  for (int iter = 0; iter < max_iterations; ++iter) {
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = x[i];
      for (std::size_t e = offset[i]; e < offset[i + 1]; ++e) acc += weight[e] * x[target[e]];
      y[i] = acc;
      peak = std::max(peak, acc);
    }
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] /= peak;
      change = std::max(change, std::abs(y[i] - x[i]));
    }
    x.swap(y);
    if (change < tol) return x;
  }
  throw NumericalError("eigenvector centrality did not converge in " +
                           std::to_string(max_iterations) + " iterations",
                       x);
}

std::vector<NodeMetrics> node_metrics(const World& world) {
  const auto& net = world.network;
  const auto eig = eigenvector_centrality(world.people, net, world.masks, world.config.transmission);
  std::vector<NodeMetrics> out(net.node_count());
  std::vector<NodeId> stamp(net.node_count(), 0);
  std::vector<NodeId> first;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto id = static_cast<NodeId>(i);
    out[i] = {id,
              world.people[i].role,
              active_degree(net, id),
              second_neighbors_stamped(net, id, stamp, first),
              strength(world, id),
              eig[i]};
  }
  return out;
}

void write_metrics_csv(std::ostream& out, std::span<const NodeMetrics> metrics) {
  out << "node_id,group,degree,second_neighbors,strength,eigcentrality\n";
  for (const auto& m : metrics) {
    out << m.id << ',' << to_string(m.role) << ',' << m.degree << ',' << m.second_neighbors << ','
        << format_double(m.strength) << ',' << format_double(m.eigencentrality) << '\n';
  }
}

double modal_value(std::span<const double> values) {
  if (values.empty()) throw InputError("modal value of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front();
  const double hi = sorted.back();
  const double iqr = percentile_sorted(sorted, 0.75) - percentile_sorted(sorted, 0.25);
  const double width = 2.0 * iqr / std::cbrt(static_cast<double>(sorted.size()));
  if (!(width > 0.0) || hi == lo) return percentile_sorted(sorted, 0.5);
  const auto bins = static_cast<std::size_t>(std::floor((hi - lo) / width)) + 1;
  std::vector<std::size_t> counts(bins, 0);
  for (double v : sorted) ++counts[std::min(bins - 1, static_cast<std::size_t>((v - lo) / width))];
  const auto peak = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  return lo + (static_cast<double>(peak) + 0.5) * width;
}

CentralityReport centrality_report(std::span<const NodeMetrics> metrics) {
  CentralityReport report{};
  std::array<std::vector<double>, kRoleCount> eig;
  for (const auto& m : metrics) {
    auto& g = report[index(m.role)];
    g.mean_degree += m.degree;
    g.mean_second_neighbors += m.second_neighbors;
    g.mean_strength += m.strength;
    g.mean_eigencentrality += m.eigencentrality;
    ++g.members;
    eig[index(m.role)].push_back(m.eigencentrality);
  }
  for (Role r : kRoles) {
    auto& g = report[index(r)];
    if (g.members == 0) continue;
    const auto n = static_cast<double>(g.members);
    g.mean_degree /= n;
    g.mean_second_neighbors /= n;
    g.mean_strength /= n;
    g.mean_eigencentrality /= n;
    g.modal_eigencentrality = modal_value(eig[index(r)]);
  }
  return report;
}

double infection_fraction(const TrialSeries& series, std::optional<Role> group, int day) {
  const GroupTally g = series.at(day, group);
  if (g.size() == 0) return 0.0;
  return static_cast<double>(g.infected()) / static_cast<double>(g.size());
}

PreventedInfections prevented_infections(std::span<const TrialSeries> with_vax,
                                         std::span<const TrialSeries> without_vax,
                                         std::optional<int> since_day) {
  if (with_vax.empty() || with_vax.size() != without_vax.size()) {
    throw InputError("prevented_infections needs two nonempty batches of equal size");
  }
  for (const auto& s : without_vax) {
    if (since_day && (*since_day < 0 || *since_day > s.last_day())) {
      throw InputError("prevented_infections: day " + std::to_string(*since_day) +
                       " is outside the series");
    }
  }
  const auto mean_infected = [](std::span<const TrialSeries> batch, std::optional<Role> group,
                                std::optional<int> day) {
    double sum = 0.0;
    for (const auto& s : batch) {
      sum += static_cast<double>(s.at(day.value_or(s.last_day()), group).infected());
    }
    return sum / static_cast<double>(batch.size());
  };
  // Infections in the without-vaccination batch that the comparison covers.
  const auto at_risk = [&](std::optional<Role> group) {
    const double end = mean_infected(without_vax, group, std::nullopt);
    return since_day ? end - mean_infected(without_vax, group, since_day) : end;
  };
  const auto relative = [](double prevented, double baseline) {
    return baseline > 0.0 ? prevented / baseline : 0.0;
  };
  PreventedInfections out;
  for (Role r : kRoles) {
    out.absolute[index(r)] =
        mean_infected(without_vax, r, std::nullopt) - mean_infected(with_vax, r, std::nullopt);
    out.relative[index(r)] = relative(out.absolute[index(r)], at_risk(r));
  }
  out.total_absolute = mean_infected(without_vax, std::nullopt, std::nullopt) -
                       mean_infected(with_vax, std::nullopt, std::nullopt);
  out.total_relative = relative(out.total_absolute, at_risk(std::nullopt));
  return out;
}

}  // namespace carenet
