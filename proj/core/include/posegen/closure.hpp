#pragma once

// Loop-closure generation: proximity candidates from a lattice index, then a
// Bernoulli trial per candidate with a Gaussian-shaped acceptance curve.
//
// Radii are in grid units and distances are measured on the integer grid
// before rescaling. Every candidate consumes exactly one draw from its
// acceptance stream; measurement noise comes from a separate stream.

#include <cstdint>
#include <vector>

#include "posegen/model.hpp"
#include "posegen/rng.hpp"

namespace posegen {

/// Occupancy of integer lattice points by (agent, node) pairs. Entries are
/// collected with insert(), then build() packs them into one contiguous
/// array grouped by cell, addressed through a dense grid over the bounding
/// box when that is compact and an open-addressing table otherwise. The
/// built index is read-only and safe to query from several threads.
class SpatialIndex {
 public:
  struct Entry {
    std::uint32_t agent = 0;
    std::uint32_t node = 0;
    friend bool operator==(const Entry&, const Entry&) = default;
    friend auto operator<=>(const Entry&, const Entry&) = default;
  };

  /// An entry together with its squared grid distance to the query point.
  struct Hit {
    Entry entry;
    std::int64_t dist2 = 0;
  };

  void insert(std::size_t agent, std::size_t node, std::int64_t x, std::int64_t y);
  void insert_trajectory(std::size_t agent, const std::vector<GridPose>& traj);

  /// Packs pending inserts. Must be called before querying; inserting again
  /// afterwards requires another build().
  void build();
  bool built() const { return !dirty_; }

  /// Entries at Euclidean grid distance <= radius from (cx, cy), sorted by
  /// (agent, node). Throws std::logic_error when inserts are pending.
  std::vector<Entry> query(std::int64_t cx, std::int64_t cy, double radius) const;

  /// Same as query() but writes hits into `out` (cleared first) to reuse
  /// storage, and skips entries whose agent is below `min_agent`.
  void query_into(std::int64_t cx, std::int64_t cy, double radius, std::vector<Hit>& out,
                  std::uint32_t min_agent = 0) const;

  std::size_t occupied_cells() const { return cells_.size(); }

 private:
  struct Cell {
    std::int64_t x = 0;
    std::int64_t y = 0;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
  };
  struct Pending {
    std::int64_t x;
    std::int64_t y;
    Entry entry;
  };

  void build_dense();
  void build_hashed();
  const Cell* find(std::int64_t x, std::int64_t y) const;
  void append_cell(const Cell& cell, std::int64_t dist2, std::uint32_t min_agent,
                   std::vector<Hit>& out) const;

  std::vector<Pending> pending_;
  std::vector<Entry> entries_;        // grouped by cell, (agent, node) order within a cell
  std::vector<Cell> cells_;
  std::vector<std::uint32_t> table_;  // cell index + 1, 0 = empty slot
  std::uint64_t mask_ = 0;
  std::vector<std::uint32_t> grid_;   // dense variant, cell index + 1, y fastest
  std::int64_t grid_height_ = 0;
  std::int64_t min_x_ = 0, max_x_ = 0, min_y_ = 0, max_y_ = 0;
  bool dirty_ = false;
};

/// p_lc * exp(-gain * (dist / R)^2) inside the radius, p_lc at dist = 0,
/// and 0 beyond R (including R = 0 with dist > 0).
double accept_probability(double dist, const LoopClosureParams& p);

/// Grid distance between two poses.
double grid_distance(const GridPose& a, const GridPose& b);

/// Intra-agent closures: for k = 1..N and each i < k within the radius, one
/// trial. Accepted edges run i -> k with the measurement in the frame of i.
std::vector<Edge> intra_lc(const AgentGraph& agent, const LoopClosureParams& p, double scale,
                           RngStream& accept_rng, RngStream& meas_rng);

/// Inter-agent closures between agents a < b. Candidates are enumerated by
/// ascending node of a, then ascending node of b.
std::vector<InterAgentEdge> inter_lc(const AgentGraph& a, const AgentGraph& b,
                                     std::size_t agent_a, std::size_t agent_b,
                                     const LoopClosureParams& p, double scale,
                                     RngStream& accept_rng, RngStream& meas_rng);

/// Acceptance and measurement streams for intra (agent) and inter (a, b)
/// closures, derived from the master seed.
RngStream intra_accept_stream(std::uint64_t seed, std::size_t agent);
RngStream intra_meas_stream(std::uint64_t seed, std::size_t agent);
RngStream inter_accept_stream(std::uint64_t seed, std::size_t a, std::size_t b);
RngStream inter_meas_stream(std::uint64_t seed, std::size_t a, std::size_t b);

/// Populates intra- and inter-agent closures for every agent and agent pair.
/// Output depends only on the graph and config, never on `threads`.
void generate_all(MultiGraph& multi, const GenerationConfig& cfg, unsigned threads = 1);

}  // namespace posegen
