#pragma once

#include <optional>
#include <string>
#include <vector>

#include "busim/domain.hpp"

namespace busim {

/// Derived search graph over (stop, line) presences. Ride arcs follow a
/// line between consecutive stops at the edge's mean time; transfer arcs
/// connect co-located line presences at transfer_penalty_s; per-stop
/// source/sink nodes anchor queries. Costs use mean times only: this is
/// the static "optimal in time" view, blind to schedules and variance.
class RoutingGraph {
 public:
  struct Arc {
    int to = 0;
    double time_s = 0.0;
    bool is_transfer = false;
  };

  struct Node {
    std::string stop_id;
    std::string line_id;  // empty for source/sink nodes
    int position = -1;    // stop position within the line, -1 for source/sink
  };

  int node_count() const { return static_cast<int>(nodes_.size()); }
  const Node& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  const std::vector<Arc>& arcs_from(int i) const { return out_[static_cast<std::size_t>(i)]; }
  std::optional<int> source_node(const std::string& stop_id) const;
  std::optional<int> sink_node(const std::string& stop_id) const;
  int ride_arc_count() const { return ride_arcs_; }
  int transfer_arc_count() const { return transfer_arcs_; }
  double transfer_penalty_s() const { return transfer_penalty_s_; }

 private:
  friend RoutingGraph build_routing_graph(const TransitNetwork&,
                                          const std::vector<LinePlan>&, double);
  std::vector<Node> nodes_;
  std::vector<std::vector<Arc>> out_;
  std::vector<std::pair<std::string, int>> sources_;  // sorted by stop id
  std::vector<std::pair<std::string, int>> sinks_;
  int ride_arcs_ = 0;
  int transfer_arcs_ = 0;
  double transfer_penalty_s_ = 0.0;
};

RoutingGraph build_routing_graph(const TransitNetwork& network,
                                 const std::vector<LinePlan>& lines,
                                 double transfer_penalty_s);

struct RoutedItinerary {
  PassengerItinerary itinerary;  // variant OPTIMAL, passenger_id left empty
  double expected_total_s = 0.0;
  int transfers = 0;
};

/// Minimum expected-time itinerary between two stops, or nullopt when no
/// path exists. Ties break on fewer transfers, then on the lexicographically
/// smallest line-id sequence, so results are deterministic.
std::optional<RoutedItinerary> compute_time_optimal_route(const RoutingGraph& graph,
                                                          const std::string& origin,
                                                          const std::string& destination);

/// The alight stop of every non-final leg, in journey order.
std::vector<std::string> extract_transfer_stops(const PassengerItinerary& itinerary);

}  // namespace busim
