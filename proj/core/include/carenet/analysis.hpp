#pragma once

// Trial aggregation, epidemic summaries and network centrality.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "carenet/world.hpp"

namespace carenet {

/// Centred window of days d-3..d+3, truncated at both ends.
std::vector<double> sliding_mean_7day(std::span<const double> series);

/// Quantile q in [0, 1] with linear interpolation between order
/// statistics at rank (n - 1) q. `sorted` must be ascending and nonempty.
double percentile_sorted(std::span<const double> sorted, double q);

enum class SeriesField : std::uint8_t {
  S = 0, E, A, I, H, R, documented_cumulative, infected_cumulative, vaccinated
};
std::string_view to_string(SeriesField f);
SeriesField parse_series_field(std::string_view name);

struct ColumnRef {
  SeriesField field = SeriesField::documented_cumulative;
  /// Unset: whole population.
  std::optional<Role> group;
  std::string name() const;
};

std::vector<double> extract_column(const TrialSeries& series, const ColumnRef& column);

struct AggregateSeries {
  std::string column;
  std::vector<int> days;
  std::vector<double> mean;
  std::vector<double> lower;  // 2.5th percentile
  std::vector<double> upper;  // 97.5th percentile
  std::vector<double> median;
};

/// Throws InputError on an empty batch or series of unequal length.
AggregateSeries aggregate_trials(std::span<const TrialSeries> batch, const ColumnRef& column);

/// Columns: day,column,mean,p2.5,p97.5. A single-trial batch omits the band.
void write_aggregate_csv(std::ostream& out, std::span<const AggregateSeries> series,
                         std::size_t trials);

/// Weight of an edge for centrality: w_kind * m^{M/2}, relative to strong = 1.
double edge_conductance(EdgeKind kind, Role a, Role b, const MaskPolicy& policy,
                        const TransmissionParams& params);

/// Sum of conductances over active incident edges.
double strength(const World& world, NodeId id);
double strength(const Population& people, const ContactNetwork& net, NodeId id,
                const MaskPolicy& policy, const TransmissionParams& params);

/// Distinct nodes at distance exactly two along active edges.
int second_neighbor_count(const ContactNetwork& net, NodeId id);

/// Active-edge degree.
int active_degree(const ContactNetwork& net, NodeId id);

inline constexpr double kEigenTolerance = 1e-10;
inline constexpr int kEigenMaxIterations = 10000;

/// Leading eigenvector of the conductance-weighted active adjacency, scaled
/// to unit maximum. Iterates x <- (W + I) x from the all-ones vector; the
/// shift leaves the eigenvector unchanged and prevents oscillation on
/// bipartite graphs. Throws NumericalError (carrying the last iterate) if
/// the max-norm change stays above `tol` after `max_iterations`.
std::vector<double> eigenvector_centrality(const Population& people, const ContactNetwork& net,
                                           const MaskPolicy& policy,
                                           const TransmissionParams& params,
                                           double tol = kEigenTolerance,
                                           int max_iterations = kEigenMaxIterations);

struct NodeMetrics {
  NodeId id = 0;
  Role role = Role::general;
  int degree = 0;
  int second_neighbors = 0;
  double strength = 0.0;
  double eigencentrality = 0.0;
};

std::vector<NodeMetrics> node_metrics(const World& world);

/// Columns: node_id,group,degree,second_neighbors,strength,eigcentrality.
void write_metrics_csv(std::ostream& out, std::span<const NodeMetrics> metrics);

/// Histogram peak with Freedman-Diaconis bin width (bin centre).
double modal_value(std::span<const double> values);

struct GroupCentrality {
  double mean_degree = 0.0;
  double mean_second_neighbors = 0.0;
  double mean_strength = 0.0;
  double mean_eigencentrality = 0.0;
  double modal_eigencentrality = 0.0;
  std::int64_t members = 0;
};

using CentralityReport = std::array<GroupCentrality, kRoleCount>;
CentralityReport centrality_report(std::span<const NodeMetrics> metrics);

/// Cumulative infections (vaccinated excluded) over group size.
double infection_fraction(const TrialSeries& series, std::optional<Role> group, int day);

struct PreventedInfections {
  /// Mean infections without vaccination minus with, per group.
  std::array<double, kRoleCount> absolute{};
  /// absolute over the mean infections without vaccination: all of them, or
  /// only those after `since_day` when given.
  std::array<double, kRoleCount> relative{};
  double total_absolute = 0.0;
  double total_relative = 0.0;
};

/// Compared at the last day of the series. Paired batches agree until the
/// vaccination day, so passing it as `since_day` expresses prevention as a
/// share of the infections that vaccination could still affect. Throws
/// InputError when the batches differ in size or are empty, or the day is
/// outside the series.
PreventedInfections prevented_infections(std::span<const TrialSeries> with_vax,
                                         std::span<const TrialSeries> without_vax,
                                         std::optional<int> since_day = std::nullopt);

}  // namespace carenet
