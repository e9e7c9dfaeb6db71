#include "busim/router.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <unordered_map>

#include "busim/errors.hpp"

namespace busim {

namespace {

std::optional<int> lookup(const std::vector<std::pair<std::string, int>>& table,
                          const std::string& stop_id) {
  auto it = std::lower_bound(table.begin(), table.end(), stop_id,
                             [](const auto& entry, const std::string& key) {
                               return entry.first < key;
                             });
  if (it == table.end() || it->first != stop_id) return std::nullopt;
  return it->second;
}

}  // namespace

std::optional<int> RoutingGraph::source_node(const std::string& stop_id) const {
  return lookup(sources_, stop_id);
}

std::optional<int> RoutingGraph::sink_node(const std::string& stop_id) const {
  return lookup(sinks_, stop_id);
}

RoutingGraph build_routing_graph(const TransitNetwork& network,
                                 const std::vector<LinePlan>& lines,
                                 double transfer_penalty_s) {
  RoutingGraph g;
  g.transfer_penalty_s_ = transfer_penalty_s;

  std::unordered_map<std::string, std::unordered_map<std::string, double>> edge_mean;
  for (const auto& e : network.edges) edge_mean[e.from][e.to] = e.mean_s;

  // Construction order is pinned by sorted ids so the graph (and therefore
  // every tiebreak downstream) is reproducible.
  std::vector<const LinePlan*> sorted_lines;
  sorted_lines.reserve(lines.size());
  for (const auto& l : lines) sorted_lines.push_back(&l);
  std::sort(sorted_lines.begin(), sorted_lines.end(),
            [](const LinePlan* a, const LinePlan* b) { return a->line_id < b->line_id; });

  std::map<std::string, std::vector<int>> presences_at_stop;  // sorted by stop id
  for (const LinePlan* line : sorted_lines) {
    for (std::size_t p = 0; p < line->stop_sequence.size(); ++p) {
      int node = static_cast<int>(g.nodes_.size());
      g.nodes_.push_back({line->stop_sequence[p], line->line_id, static_cast<int>(p)});
      presences_at_stop[line->stop_sequence[p]].push_back(node);
    }
  }
  for (const auto& entry : presences_at_stop) {
    g.sources_.emplace_back(entry.first, static_cast<int>(g.nodes_.size()));
    g.nodes_.push_back({entry.first, "", -1});
    g.sinks_.emplace_back(entry.first, static_cast<int>(g.nodes_.size()));
    g.nodes_.push_back({entry.first, "", -1});
  }
  // Stops served by no line still get source/sink anchors so queries on
  // them resolve to "no path" rather than "unknown stop".
  for (const auto& stop : network.stops) {
    if (!presences_at_stop.count(stop.id)) {
      g.sources_.emplace_back(stop.id, static_cast<int>(g.nodes_.size()));
      g.nodes_.push_back({stop.id, "", -1});
      g.sinks_.emplace_back(stop.id, static_cast<int>(g.nodes_.size()));
      g.nodes_.push_back({stop.id, "", -1});
    }
  }
  std::sort(g.sources_.begin(), g.sources_.end());
  std::sort(g.sinks_.begin(), g.sinks_.end());

  g.out_.assign(g.nodes_.size(), {});

  // Ride arcs along each line.
  int base = 0;
  for (const LinePlan* line : sorted_lines) {
    int len = static_cast<int>(line->stop_sequence.size());
    for (int p = 0; p + 1 < len; ++p) {
      double mean = edge_mean.at(line->stop_sequence[static_cast<std::size_t>(p)])
                        .at(line->stop_sequence[static_cast<std::size_t>(p + 1)]);
      g.out_[static_cast<std::size_t>(base + p)].push_back({base + p + 1, mean, false});
      ++g.ride_arcs_;
    }
    base += len;
  }

  // Board/alight anchors and transfer arcs between co-located presences.
  for (const auto& [stop_id, nodes] : presences_at_stop) {
    int src = *g.source_node(stop_id);
    int snk = *g.sink_node(stop_id);
    for (int n : nodes) {
      g.out_[static_cast<std::size_t>(src)].push_back({n, 0.0, false});
      g.out_[static_cast<std::size_t>(n)].push_back({snk, 0.0, false});
    }
    for (int a : nodes) {
      for (int b : nodes) {
        if (a == b) continue;
        if (g.nodes_[static_cast<std::size_t>(a)].line_id ==
            g.nodes_[static_cast<std::size_t>(b)].line_id)
          continue;
        g.out_[static_cast<std::size_t>(a)].push_back({b, transfer_penalty_s, true});
        ++g.transfer_arcs_;
      }
    }
  }
  return g;
}

namespace {

struct Label {
  double time = std::numeric_limits<double>::infinity();
  int transfers = std::numeric_limits<int>::max();
  bool operator<(const Label& o) const {
    if (time != o.time) return time < o.time;
    return transfers < o.transfers;
  }
  bool operator==(const Label& o) const {
    return time == o.time && transfers == o.transfers;
  }
};

/// The token a boarding arc contributes to the leg-line sequence: the line
/// of the node being boarded. Ride and alight arcs contribute nothing.
std::optional<std::string> arc_token(const RoutingGraph& g, int from, int to,
                                     bool is_transfer) {
  const auto& from_node = g.node(from);
  const auto& to_node = g.node(to);
  if (is_transfer) return to_node.line_id;
  if (from_node.line_id.empty() && !to_node.line_id.empty()) return to_node.line_id;
  return std::nullopt;
}

}  // namespace

std::optional<RoutedItinerary> compute_time_optimal_route(const RoutingGraph& graph,
                                                          const std::string& origin,
                                                          const std::string& destination) {
  if (origin == destination) throw InvalidParams("origin equals destination");
  auto src = graph.source_node(origin);
  auto dst = graph.sink_node(destination);
  if (!src) throw InvalidParams("unknown origin stop " + origin);
  if (!dst) throw InvalidParams("unknown destination stop " + destination);

  const int n = graph.node_count();
  std::vector<Label> dist(static_cast<std::size_t>(n));

  // Phase 1: Dijkstra on the (time, transfers) tuple. Both components are
  // non-negative and monotone along arcs, so the classic argument holds.
  using QueueEntry = std::tuple<double, int, int>;  // time, transfers, node
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> queue;
  dist[static_cast<std::size_t>(*src)] = {0.0, 0};
  queue.push({0.0, 0, *src});
  while (!queue.empty()) {
    auto [time, transfers, u] = queue.top();
    queue.pop();
    Label label{time, transfers};
    if (!(label == dist[static_cast<std::size_t>(u)])) continue;  // stale
    for (const auto& arc : graph.arcs_from(u)) {
      Label cand{time + arc.time_s, transfers + (arc.is_transfer ? 1 : 0)};
      if (cand < dist[static_cast<std::size_t>(arc.to)]) {
        dist[static_cast<std::size_t>(arc.to)] = cand;
        queue.push({cand.time, cand.transfers, arc.to});
      }
    }
  }

  const Label target = dist[static_cast<std::size_t>(*dst)];
  if (!(target.time < std::numeric_limits<double>::infinity())) return std::nullopt;

  // Phase 2: among tight arcs (those on some optimal path) choose the
  // lexicographically smallest leg-line sequence. Tight subgraph is a DAG:
  // ride arcs advance time, transfer arcs advance the transfer count.
  struct Suffix {
    bool known = false;
    bool reachable = false;
    std::vector<std::string> tokens;
    int via_arc = -1;  // index into arcs_from(node)
  };
  std::vector<Suffix> memo(static_cast<std::size_t>(n));

  auto is_tight = [&](int u, const RoutingGraph::Arc& arc) {
    const Label& du = dist[static_cast<std::size_t>(u)];
    if (!(du.time < std::numeric_limits<double>::infinity())) return false;
    Label via{du.time + arc.time_s, du.transfers + (arc.is_transfer ? 1 : 0)};
    return via == dist[static_cast<std::size_t>(arc.to)];
  };

  // Memoized DFS; the tight subgraph is acyclic, so marking before the
  // descent is safe.
  auto resolve = [&](auto&& self, int u) -> const Suffix& {
    Suffix& s = memo[static_cast<std::size_t>(u)];
    if (s.known) return s;
    s.known = true;
    if (u == *dst) {
      s.reachable = true;
      return s;
    }
    const auto& arcs = graph.arcs_from(u);
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      if (!is_tight(u, arcs[i])) continue;
      const Suffix& down = self(self, arcs[i].to);
      if (!down.reachable) continue;
      std::vector<std::string> cand = down.tokens;
      if (auto token = arc_token(graph, u, arcs[i].to, arcs[i].is_transfer)) {
        cand.insert(cand.begin(), *token);
      }
      if (!s.reachable || cand < s.tokens) {
        s.reachable = true;
        s.tokens = std::move(cand);
        s.via_arc = static_cast<int>(i);
      }
    }
    return s;
  };
  const Suffix& best = resolve(resolve, *src);
  if (!best.reachable) return std::nullopt;

  // Walk the chosen arcs and materialize legs.
  RoutedItinerary routed;
  routed.expected_total_s = target.time;
  routed.transfers = target.transfers;
  routed.itinerary.variant = Variant::kOptimal;

  int u = *src;
  std::string leg_line;
  std::string leg_board;
  while (u != *dst) {
    const Suffix& s = memo[static_cast<std::size_t>(u)];
    const auto& arc = graph.arcs_from(u)[static_cast<std::size_t>(s.via_arc)];
    const auto& from_node = graph.node(u);
    const auto& to_node = graph.node(arc.to);
    bool boarding = arc_token(graph, u, arc.to, arc.is_transfer).has_value();
    bool alighting = !from_node.line_id.empty() && (arc.is_transfer || to_node.line_id.empty());
    if (alighting) {
      routed.itinerary.legs.push_back({leg_line, leg_board, from_node.stop_id});
    }
    if (boarding) {
      leg_line = to_node.line_id;
      leg_board = to_node.stop_id;
    }
    u = arc.to;
  }
  return routed;
}

std::vector<std::string> extract_transfer_stops(const PassengerItinerary& itinerary) {
  std::vector<std::string> stops;
  for (std::size_t k = 0; k + 1 < itinerary.legs.size(); ++k) {
    stops.push_back(itinerary.legs[k].alight_stop);
  }
  return stops;
}

}  // namespace busim
