#include "posegen/closure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "parallel.hpp"
#include "posegen/noise.hpp"

namespace posegen {

namespace {

std::uint64_t cell_hash(std::int64_t x, std::int64_t y) {
  return mix64(static_cast<std::uint64_t>(x) * 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(y));
}

}  // namespace

void SpatialIndex::insert(std::size_t agent, std::size_t node, std::int64_t x, std::int64_t y) {
  pending_.push_back({x, y, {static_cast<std::uint32_t>(agent), static_cast<std::uint32_t>(node)}});
  dirty_ = true;
}

void SpatialIndex::insert_trajectory(std::size_t agent, const std::vector<GridPose>& traj) {
  pending_.reserve(pending_.size() + traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    insert(agent, k, traj[k].x, traj[k].y);
  }
}

void SpatialIndex::build() {
  // pending_ keeps every insert so that a later build() starts from scratch.
  if (pending_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::length_error("SpatialIndex: too many entries");
  }
  entries_.clear();
  cells_.clear();
  table_.clear();
  grid_.clear();
  dirty_ = false;
  if (pending_.empty()) {
    return;
  }
  min_x_ = max_x_ = pending_.front().x;
  min_y_ = max_y_ = pending_.front().y;
  for (const auto& rec : pending_) {
    min_x_ = std::min(min_x_, rec.x);
    max_x_ = std::max(max_x_, rec.x);
    min_y_ = std::min(min_y_, rec.y);
    max_y_ = std::max(max_y_, rec.y);
  }
  const double width = static_cast<double>(max_x_ - min_x_) + 1.0;
  const double height = static_cast<double>(max_y_ - min_y_) + 1.0;
  if (width * height <= 8.0 * static_cast<double>(pending_.size()) + 4096.0) {
    build_dense();
  } else {
    build_hashed();
  }
}

void SpatialIndex::build_dense() {
  // Counting sort over the bounding box; cells come out in (x, y) order.
  grid_height_ = max_y_ - min_y_ + 1;
  const auto slot_of = [&](std::int64_t x, std::int64_t y) {
    return static_cast<std::size_t>((x - min_x_) * grid_height_ + (y - min_y_));
  };
  grid_.assign(static_cast<std::size_t>(max_x_ - min_x_ + 1) * grid_height_, 0);
  for (const auto& rec : pending_) ++grid_[slot_of(rec.x, rec.y)];

  std::uint32_t offset = 0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (grid_[i] == 0) continue;
    const auto x = min_x_ + static_cast<std::int64_t>(i) / grid_height_;
    const auto y = min_y_ + static_cast<std::int64_t>(i) % grid_height_;
    cells_.push_back({x, y, offset, offset});
    offset += grid_[i];
    grid_[i] = static_cast<std::uint32_t>(cells_.size());
  }

  entries_.resize(pending_.size());
  bool ordered = true;
  for (const auto& rec : pending_) {
    Cell& c = cells_[grid_[slot_of(rec.x, rec.y)] - 1];
    if (c.end > c.begin && rec.entry < entries_[c.end - 1]) ordered = false;
    entries_[c.end++] = rec.entry;
  }
  if (!ordered) {
    for (const auto& c : cells_) {
      std::sort(entries_.begin() + c.begin, entries_.begin() + c.end);
    }
  }
}

void SpatialIndex::build_hashed() {
  std::sort(pending_.begin(), pending_.end(), [](const Pending& a, const Pending& b) {
    return std::tie(a.x, a.y, a.entry) < std::tie(b.x, b.y, b.entry);
  });
  entries_.reserve(pending_.size());
  for (const auto& rec : pending_) {
    if (cells_.empty() || cells_.back().x != rec.x || cells_.back().y != rec.y) {
      const auto at = static_cast<std::uint32_t>(entries_.size());
      cells_.push_back({rec.x, rec.y, at, at});
    }
    entries_.push_back(rec.entry);
    ++cells_.back().end;
  }
  std::size_t slots = 16;
  while (slots < 2 * cells_.size()) slots *= 2;
  table_.assign(slots, 0);
  mask_ = slots - 1;
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    std::uint64_t h = cell_hash(cells_[c].x, cells_[c].y) & mask_;
    while (table_[h] != 0) h = (h + 1) & mask_;
    table_[h] = static_cast<std::uint32_t>(c + 1);
  }
}

const SpatialIndex::Cell* SpatialIndex::find(std::int64_t x, std::int64_t y) const {
  if (!grid_.empty()) {
    // Callers clip to the bounding box.
    const std::uint32_t slot =
        grid_[static_cast<std::size_t>((x - min_x_) * grid_height_ + (y - min_y_))];
    return slot == 0 ? nullptr : &cells_[slot - 1];
  }
  for (std::uint64_t h = cell_hash(x, y) & mask_;; h = (h + 1) & mask_) {
    const std::uint32_t slot = table_[h];
    if (slot == 0) return nullptr;
    const Cell& c = cells_[slot - 1];
    if (c.x == x && c.y == y) return &c;
  }
}

void SpatialIndex::append_cell(const Cell& cell, std::int64_t dist2, std::uint32_t min_agent,
                               std::vector<Hit>& out) const {
  auto first = entries_.begin() + cell.begin;
  const auto last = entries_.begin() + cell.end;
  if (min_agent > 0) {
    first = std::lower_bound(first, last, Entry{min_agent, 0});
  }
  for (; first != last; ++first) out.push_back({*first, dist2});
}

std::vector<SpatialIndex::Entry> SpatialIndex::query(std::int64_t cx, std::int64_t cy,
                                                     double radius) const {
  std::vector<Hit> hits;
  query_into(cx, cy, radius, hits);
  std::vector<Entry> out;
  out.reserve(hits.size());
  for (const auto& h : hits) out.push_back(h.entry);
  return out;
}

void SpatialIndex::query_into(std::int64_t cx, std::int64_t cy, double radius,
                              std::vector<Hit>& out, std::uint32_t min_agent) const {
  if (dirty_) {
    throw std::logic_error("SpatialIndex: build() must be called after insert()");
  }
  out.clear();
  if (cells_.empty() || !(radius >= 0.0)) {
    return;
  }
  const double reach = std::min(std::ceil(radius), 4.0e9);
  const auto rc = static_cast<std::int64_t>(reach);
  const std::int64_t x0 = std::max(cx - rc, min_x_);
  const std::int64_t x1 = std::min(cx + rc, max_x_);
  const std::int64_t y0 = std::max(cy - rc, min_y_);
  const std::int64_t y1 = std::min(cy + rc, max_y_);
  if (x0 > x1 || y0 > y1) {
    return;
  }
  auto dist2 = [&](std::int64_t x, std::int64_t y) { return (x - cx) * (x - cx) + (y - cy) * (y - cy); };
  auto within = [&](std::int64_t d2) { return std::sqrt(static_cast<double>(d2)) <= radius; };
  const double box = static_cast<double>(x1 - x0 + 1) * static_cast<double>(y1 - y0 + 1);
  std::size_t cells_hit = 0;
  if (box > static_cast<double>(cells_.size())) {
    // Sparse occupancy relative to the search box: scan occupied cells.
    for (const auto& c : cells_) {
      const std::int64_t d2 = dist2(c.x, c.y);
      if (within(d2)) {
        append_cell(c, d2, min_agent, out);
        ++cells_hit;
      }
    }
  } else {
    for (std::int64_t x = x0; x <= x1; ++x) {
      for (std::int64_t y = y0; y <= y1; ++y) {
        const std::int64_t d2 = dist2(x, y);
        if (!within(d2)) continue;
        if (const Cell* c = find(x, y)) {
          append_cell(*c, d2, min_agent, out);
          ++cells_hit;
        }
      }
    }
  }
  // A single cell is already in (agent, node) order.
  if (cells_hit > 1) {
    std::sort(out.begin(), out.end(),
              [](const Hit& a, const Hit& b) { return a.entry < b.entry; });
  }
}

double accept_probability(double dist, const LoopClosureParams& p) {
  if (dist == 0.0) {
    return p.prob_at_zero;
  }
  if (dist > p.radius || p.radius == 0.0) {
    return 0.0;
  }
  const double r = dist / p.radius;
  return p.prob_at_zero * std::exp(-p.decay_gain * r * r);
}

double grid_distance(const GridPose& a, const GridPose& b) {
  const auto dx = static_cast<double>(a.x - b.x);
  const auto dy = static_cast<double>(a.y - b.y);
  return std::sqrt(dx * dx + dy * dy);
}

namespace {

InformationMatrix lc_edge_information(const LoopClosureParams& p) {
  LoopClosureParams floored = p;
  floored.sigma_pos = std::max(p.sigma_pos, kInfoSigmaFloor);
  floored.sigma_ang = std::max(p.sigma_ang, kInfoSigmaFloor);
  return lc_information(floored);
}

// accept_probability by squared grid distance, tabulated for the small
// integer values that occur inside moderate radii.
class AcceptTable {
 public:
  explicit AcceptTable(const LoopClosureParams& p) : p_(p) {
    if (p.radius >= 0.0 && p.radius <= 256.0) {
      const auto n = static_cast<std::size_t>(std::floor(p.radius * p.radius)) + 1;
      table_.resize(n);
      for (std::size_t d2 = 0; d2 < n; ++d2) {
        table_[d2] = accept_probability(std::sqrt(static_cast<double>(d2)), p);
      }
    }
  }

  double operator()(std::int64_t d2) const {
    const auto i = static_cast<std::size_t>(d2);
    return i < table_.size() ? table_[i]
                             : accept_probability(std::sqrt(static_cast<double>(d2)), p_);
  }

 private:
  LoopClosureParams p_;
  std::vector<double> table_;
};

}  // namespace

std::vector<Edge> intra_lc(const AgentGraph& agent, const LoopClosureParams& p, double scale,
                           RngStream& accept_rng, RngStream& meas_rng) {
  std::vector<Edge> edges;
  const auto& traj = agent.ground_truth;
  if (traj.empty() || p.prob_at_zero <= 0.0) {
    return edges;
  }
  const InformationMatrix info = lc_edge_information(p);
  SpatialIndex index;
  index.insert_trajectory(0, traj);
  index.build();
  const AcceptTable prob_at(p);
  std::vector<SpatialIndex::Hit> hits;
  for (std::size_t k = 1; k < traj.size(); ++k) {
    index.query_into(traj[k].x, traj[k].y, p.radius, hits);
    // Hits are in node order; only poses 0..k-1 are candidates.
    for (const auto& [e, d2] : hits) {
      if (e.node >= k) break;
      const double prob = prob_at(d2);
      if (accept_rng.uniform01() < prob) {
        Edge edge;
        edge.from_id = e.node;
        edge.to_id = k;
        edge.kind = EdgeKind::intra_lc;
        edge.meas = lc_measurement(to_scaled(traj[k], scale), to_scaled(traj[e.node], scale), p,
                                   meas_rng);
        edge.meas.info = info;
        edges.push_back(edge);
      }
    }
  }
  return edges;
}

namespace {

InterAgentEdge make_inter_edge(const AgentGraph& a, const AgentGraph& b, std::size_t agent_a,
                               std::size_t node_a, std::size_t agent_b, std::size_t node_b,
                               const LoopClosureParams& p, const InformationMatrix& info,
                               double scale, RngStream& meas_rng) {
  InterAgentEdge edge;
  edge.agent_a = agent_a;
  edge.node_a = node_a;
  edge.agent_b = agent_b;
  edge.node_b = node_b;
  edge.meas = lc_measurement(to_scaled(b.ground_truth[node_b], scale),
                             to_scaled(a.ground_truth[node_a], scale), p, meas_rng);
  edge.meas.info = info;
  return edge;
}

}  // namespace

std::vector<InterAgentEdge> inter_lc(const AgentGraph& a, const AgentGraph& b,
                                     std::size_t agent_a, std::size_t agent_b,
                                     const LoopClosureParams& p, double scale,
                                     RngStream& accept_rng, RngStream& meas_rng) {
  std::vector<InterAgentEdge> edges;
  if (a.ground_truth.empty() || b.ground_truth.empty() || p.prob_at_zero <= 0.0) {
    return edges;
  }
  const InformationMatrix info = lc_edge_information(p);
  SpatialIndex index;
  index.insert_trajectory(agent_b, b.ground_truth);
  index.build();
  const AcceptTable prob_at(p);
  std::vector<SpatialIndex::Hit> hits;
  for (std::size_t i = 0; i < a.ground_truth.size(); ++i) {
    const auto& pa = a.ground_truth[i];
    index.query_into(pa.x, pa.y, p.radius, hits);
    for (const auto& [e, d2] : hits) {
      const double prob = prob_at(d2);
      if (accept_rng.uniform01() < prob) {
        edges.push_back(make_inter_edge(a, b, agent_a, i, agent_b, e.node, p, info, scale,
                                        meas_rng));
      }
    }
  }
  return edges;
}

RngStream intra_accept_stream(std::uint64_t seed, std::size_t agent) {
  return RngStream::derive(seed, "intra_lc/accept", agent);
}
RngStream intra_meas_stream(std::uint64_t seed, std::size_t agent) {
  return RngStream::derive(seed, "intra_lc/measure", agent);
}
RngStream inter_accept_stream(std::uint64_t seed, std::size_t a, std::size_t b) {
  return RngStream::derive(seed, "inter_lc/accept", a, b);
}
RngStream inter_meas_stream(std::uint64_t seed, std::size_t a, std::size_t b) {
  return RngStream::derive(seed, "inter_lc/measure", a, b);
}

void generate_all(MultiGraph& multi, const GenerationConfig& cfg, unsigned threads) {
  const std::size_t n = multi.agents.size();
  const double scale = multi.scale;
  const bool any_inter = n > 1 && cfg.inter_lc.prob_at_zero > 0.0;

  // One shared index answers every pair query for a node at once, so the
  // lookup cost grows with the number of agents rather than agent pairs.
  SpatialIndex global;
  if (any_inter) {
    for (std::size_t b = 1; b < n; ++b) {
      global.insert_trajectory(b, multi.agents[b].ground_truth);
    }
  }
  global.build();
  const InformationMatrix inter_info =
      any_inter ? lc_edge_information(cfg.inter_lc) : InformationMatrix{};
  const AcceptTable inter_prob(cfg.inter_lc);

  std::vector<std::vector<InterAgentEdge>> inter_by_agent(n);
  detail::parallel_for(n, threads, [&](std::size_t a) {
    auto& agent = multi.agents[a];
    auto acc = intra_accept_stream(cfg.master_seed, a);
    auto meas = intra_meas_stream(cfg.master_seed, a);
    agent.intra_lc = intra_lc(agent, cfg.intra_lc, scale, acc, meas);

    if (!any_inter || a + 1 >= n) return;
    std::vector<RngStream> accept, measure;
    std::vector<std::vector<InterAgentEdge>> per_pair(n);
    accept.reserve(n);
    measure.reserve(n);
    for (std::size_t b = 0; b < n; ++b) {
      accept.push_back(inter_accept_stream(cfg.master_seed, a, b));
      measure.push_back(inter_meas_stream(cfg.master_seed, a, b));
    }
    const auto& traj = agent.ground_truth;
    std::vector<SpatialIndex::Hit> hits;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      global.query_into(traj[i].x, traj[i].y, cfg.inter_lc.radius, hits,
                        static_cast<std::uint32_t>(a + 1));
      for (const auto& [e, d2] : hits) {
        if (accept[e.agent].uniform01() < inter_prob(d2)) {
          const auto& other = multi.agents[e.agent];
          per_pair[e.agent].push_back(make_inter_edge(agent, other, a, i, e.agent, e.node,
                                                      cfg.inter_lc, inter_info, scale,
                                                      measure[e.agent]));
        }
      }
    }
    for (auto& edges : per_pair) {
      inter_by_agent[a].insert(inter_by_agent[a].end(), edges.begin(), edges.end());
    }
  });

  multi.inter_lc.clear();
  for (auto& edges : inter_by_agent) {
    multi.inter_lc.insert(multi.inter_lc.end(), edges.begin(), edges.end());
  }
}

}  // namespace posegen
