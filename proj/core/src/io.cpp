#include "posegen/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

#include "posegen/eval.hpp"

namespace posegen {

namespace fs = std::filesystem;

const char* to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::missing_inter_lc_file: return "missing inter_agent_lc.dat";
    case ParseErrorKind::missing_posegraph: return "missing posegraph.g2o";
    case ParseErrorKind::token_count: return "token-count mismatch";
    case ParseErrorKind::non_numeric: return "non-numeric field";
    case ParseErrorKind::unknown_record: return "unknown record";
    case ParseErrorKind::non_contiguous_agents: return "non-contiguous agent indices";
    case ParseErrorKind::inconsistent_graph: return "inconsistent graph";
  }
  return "parse error";
}

ParseError::ParseError(ParseErrorKind kind, const fs::path& file, std::size_t line,
                       const std::string& detail)
    : std::runtime_error(file.string() + (line ? ":" + std::to_string(line) : std::string()) +
                         ": " + to_string(kind) + (detail.empty() ? "" : " (" + detail + ")")),
      kind_(kind),
      file_(file),
      line_(line) {}

// ---------------------------------------------------------------------------
// Writing

std::string format_real(double value) {
  if (value == 0.0) {
    return "0";
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

void append_info(std::string& out, const InformationMatrix& I) {
  for (double v : {I.i11, I.i12, I.i13, I.i22, I.i23, I.i33}) {
    out += ' ';
    out += format_real(v);
  }
}

void append_measurement(std::string& out, const RelativeMeasurement& m) {
  out += ' ';
  out += format_real(m.dx);
  out += ' ';
  out += format_real(m.dy);
  out += ' ';
  out += format_real(m.dtheta);
  append_info(out, m.info);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) {
    throw IoError("cannot open for writing", path);
  }
  f << text;
  f.flush();
  if (!f) {
    throw IoError("write failed", path);
  }
}

std::vector<ScaledPose> vertex_estimates(const AgentGraph& agent, double scale) {
  if (!agent.estimate.empty()) {
    return agent.estimate;
  }
  if (agent.ground_truth.empty()) {
    return {};
  }
  return dead_reckon(std::span<const Edge>(agent.odometry),
                     to_scaled(agent.ground_truth.front(), scale));
}

}  // namespace

std::string g2o_vertex_line(std::size_t id, const ScaledPose& pose) {
  return "VERTEX_SE2 " + std::to_string(id) + ' ' + format_real(pose.x) + ' ' +
         format_real(pose.y) + ' ' + format_real(pose.heading);
}

std::string g2o_edge_line(std::size_t from_id, std::size_t to_id, const RelativeMeasurement& m) {
  std::string out = "EDGE_SE2 " + std::to_string(from_id) + ' ' + std::to_string(to_id);
  append_measurement(out, m);
  return out;
}

std::string inter_lc_line(const InterAgentEdge& e) {
  std::string out = std::to_string(e.agent_a + 1) + ' ' + std::to_string(e.node_a) + ' ' +
                    std::to_string(e.agent_b + 1) + ' ' + std::to_string(e.node_b);
  append_measurement(out, e.meas);
  return out;
}

std::string tum_line(std::size_t index, const ScaledPose& pose) {
  char stamp[32];
  std::snprintf(stamp, sizeof(stamp), "%.6f", static_cast<double>(index));
  const double half = pose.heading / 2.0;
  return std::string(stamp) + ' ' + format_real(pose.x) + ' ' + format_real(pose.y) +
         " 0 0 0 " + format_real(std::sin(half)) + ' ' + format_real(std::cos(half));
}

std::string agent_g2o_text(const AgentGraph& agent, double scale) {
  std::string out;
  const auto vertices = vertex_estimates(agent, scale);
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    out += g2o_vertex_line(k, vertices[k]);
    out += '\n';
  }
  for (const auto* edges : {&agent.odometry, &agent.intra_lc}) {
    for (const auto& e : *edges) {
      out += g2o_edge_line(e.from_id, e.to_id, e.meas);
      out += '\n';
    }
  }
  return out;
}

void write_agent_g2o(const AgentGraph& agent, double scale, const fs::path& path) {
  write_text(path, agent_g2o_text(agent, scale));
}

void write_tum(std::span<const ScaledPose> traj, const fs::path& path) {
  std::string out;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out += tum_line(k, traj[k]);
    out += '\n';
  }
  write_text(path, out);
}

namespace {

const std::regex& agent_dir_pattern() {
  static const std::regex re("agent([0-9]+)");
  return re;
}

std::string agent_dir_name(std::size_t agent) { return "agent" + std::to_string(agent + 1); }

}  // namespace

void write_multig2o(const MultiGraph& multi, const fs::path& root, bool overwrite) {
  std::error_code ec;
  if (fs::exists(root, ec)) {
    if (!fs::is_directory(root, ec)) {
      throw IoError("target exists and is not a directory", root);
    }
    if (!fs::is_empty(root, ec)) {
      if (!overwrite) {
        throw IoError("target directory is not empty (pass overwrite to replace)", root);
      }
      for (const auto& entry : fs::directory_iterator(root)) {
        const auto name = entry.path().filename().string();
        if (name == "inter_agent_lc.dat" ||
            (entry.is_directory() && std::regex_match(name, agent_dir_pattern()))) {
          fs::remove_all(entry.path(), ec);
          if (ec) throw IoError("cannot remove stale entry", entry.path());
        }
      }
    }
  }
  fs::create_directories(root, ec);
  if (ec) {
    throw IoError("cannot create directory", root);
  }

  // Directory tree first, then file contents.
  for (std::size_t a = 0; a < multi.agents.size(); ++a) {
    const fs::path dir = root / agent_dir_name(a);
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory", dir);
  }
  for (std::size_t a = 0; a < multi.agents.size(); ++a) {
    const auto& agent = multi.agents[a];
    const fs::path dir = root / agent_dir_name(a);
    write_agent_g2o(agent, multi.scale, dir / "posegraph.g2o");
    std::vector<ScaledPose> truth;
    truth.reserve(agent.ground_truth.size());
    for (const auto& p : agent.ground_truth) truth.push_back(to_scaled(p, multi.scale));
    write_tum(truth, dir / (agent_dir_name(a) + "_GT.tum"));
  }

  std::string inter;
  for (const auto& e : multi.inter_lc) {
    inter += inter_lc_line(e);
    inter += '\n';
  }
  write_text(root / "inter_agent_lc.dat", inter);
}

std::vector<std::size_t> concatenated_offsets(const MultiGraph& multi) {
  std::vector<std::size_t> offsets;
  offsets.reserve(multi.agents.size());
  std::size_t acc = 0;
  for (const auto& agent : multi.agents) {
    offsets.push_back(acc);
    acc += agent.node_count();
  }
  return offsets;
}

std::string concatenated_g2o_text(const MultiGraph& multi) {
  const auto offsets = concatenated_offsets(multi);
  std::string out;
  for (std::size_t a = 0; a < multi.agents.size(); ++a) {
    const auto vertices = vertex_estimates(multi.agents[a], multi.scale);
    for (std::size_t k = 0; k < vertices.size(); ++k) {
      out += g2o_vertex_line(offsets[a] + k, vertices[k]);
      out += '\n';
    }
  }
  for (std::size_t a = 0; a < multi.agents.size(); ++a) {
    const auto& agent = multi.agents[a];
    for (const auto* edges : {&agent.odometry, &agent.intra_lc}) {
      for (const auto& e : *edges) {
        out += g2o_edge_line(offsets[a] + e.from_id, offsets[a] + e.to_id, e.meas);
        out += '\n';
      }
    }
  }
  for (const auto& e : multi.inter_lc) {
    out += g2o_edge_line(offsets[e.agent_a] + e.node_a, offsets[e.agent_b] + e.node_b, e.meas);
    out += '\n';
  }
  return out;
}

void write_concatenated_g2o(const MultiGraph& multi, const fs::path& path) {
  write_text(path, concatenated_g2o_text(multi));
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Tokenized {
  std::size_t line_no;
  std::vector<std::string> tokens;
};

std::vector<Tokenized> read_records(const fs::path& path) {
  std::ifstream f(path);
  if (!f) {
    throw IoError("cannot open for reading", path);
  }
  std::vector<Tokenized> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    for (std::string tok; ss >> tok;) tokens.push_back(tok);
    if (tokens.empty() || tokens.front().starts_with('#')) continue;
    out.push_back({line_no, std::move(tokens)});
  }
  return out;
}

class FieldReader {
 public:
  FieldReader(const fs::path& file, const Tokenized& rec) : file_(file), rec_(rec) {}

  void expect_count(std::size_t n, const char* what) const {
    if (rec_.tokens.size() != n) {
      throw ParseError(ParseErrorKind::token_count, file_, rec_.line_no,
                       std::string(what) + " expects " + std::to_string(n) + " tokens, got " +
                           std::to_string(rec_.tokens.size()));
    }
  }

  double real(std::size_t i) const {
    const auto& t = rec_.tokens.at(i);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v)) {
      throw ParseError(ParseErrorKind::non_numeric, file_, rec_.line_no,
                       "token " + std::to_string(i + 1) + " '" + t + "'");
    }
    return v;
  }

  std::size_t index(std::size_t i) const {
    const auto& t = rec_.tokens.at(i);
    std::size_t v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
      throw ParseError(ParseErrorKind::non_numeric, file_, rec_.line_no,
                       "token " + std::to_string(i + 1) + " '" + t +
                           "' is not a non-negative integer");
    }
    return v;
  }

  RelativeMeasurement measurement(std::size_t first) const {
    RelativeMeasurement m;
    m.dx = real(first);
    m.dy = real(first + 1);
    m.dtheta = real(first + 2);
    m.info = {real(first + 3), real(first + 4), real(first + 5),
              real(first + 6), real(first + 7), real(first + 8)};
    return m;
  }

  [[noreturn]] void fail(ParseErrorKind kind, const std::string& detail) const {
    throw ParseError(kind, file_, rec_.line_no, detail);
  }

 private:
  const fs::path& file_;
  const Tokenized& rec_;
};

constexpr std::size_t kVertexTokens = 5;
constexpr std::size_t kEdgeTokens = 12;
constexpr std::size_t kInterTokens = 13;
constexpr std::size_t kTumTokens = 8;

}  // namespace

G2oFile read_g2o(const fs::path& path) {
  G2oFile out;
  for (const auto& rec : read_records(path)) {
    FieldReader r(path, rec);
    const auto& tag = rec.tokens.front();
    if (tag == "VERTEX_SE2") {
      r.expect_count(kVertexTokens, "VERTEX_SE2");
      out.vertices.push_back({r.index(1), {r.real(2), r.real(3), r.real(4)}});
    } else if (tag == "EDGE_SE2") {
      r.expect_count(kEdgeTokens, "EDGE_SE2");
      out.edges.push_back({r.index(1), r.index(2), r.measurement(3)});
    } else {
      r.fail(ParseErrorKind::unknown_record, "tag '" + tag + "'");
    }
  }
  return out;
}

namespace {

AgentGraph agent_from_g2o(const fs::path& path) {
  const G2oFile file = read_g2o(path);
  AgentGraph agent;
  agent.estimate.reserve(file.vertices.size());
  for (std::size_t k = 0; k < file.vertices.size(); ++k) {
    if (file.vertices[k].id != k) {
      throw ParseError(ParseErrorKind::inconsistent_graph, path, 0,
                       "vertex ids must be 0..N-1 in order; found " +
                           std::to_string(file.vertices[k].id) + " at position " +
                           std::to_string(k));
    }
    agent.estimate.push_back(file.vertices[k].pose);
  }
  const std::size_t n = agent.estimate.size();
  // The first edge joining k -> k+1 is the odometry edge; any repeat of the
  // same pair is a loop closure.
  std::vector<bool> have_odom(n > 0 ? n - 1 : 0, false);
  std::vector<Edge> odom(have_odom.size());
  for (const auto& e : file.edges) {
    if (e.from_id >= n || e.to_id >= n) {
      throw ParseError(ParseErrorKind::inconsistent_graph, path, 0,
                       "edge " + std::to_string(e.from_id) + " -> " + std::to_string(e.to_id) +
                           " references a missing vertex");
    }
    if (e.to_id == e.from_id + 1 && !have_odom[e.from_id]) {
      have_odom[e.from_id] = true;
      odom[e.from_id] = {e.from_id, e.to_id, e.meas, EdgeKind::odometry};
    } else {
      agent.intra_lc.push_back({e.from_id, e.to_id, e.meas, EdgeKind::intra_lc});
    }
  }
  for (std::size_t k = 0; k < have_odom.size(); ++k) {
    if (!have_odom[k]) {
      throw ParseError(ParseErrorKind::inconsistent_graph, path, 0,
                       "no odometry edge " + std::to_string(k) + " -> " + std::to_string(k + 1));
    }
  }
  agent.odometry = std::move(odom);
  return agent;
}

std::vector<ScaledPose> read_tum(const fs::path& path) {
  std::vector<ScaledPose> out;
  for (const auto& rec : read_records(path)) {
    FieldReader r(path, rec);
    r.expect_count(kTumTokens, "tum row");
    const double qz = r.real(6);
    const double qw = r.real(7);
    out.push_back({r.real(1), r.real(2), wrap_angle(2.0 * std::atan2(qz, qw))});
  }
  return out;
}

std::vector<GridPose> to_grid(const std::vector<ScaledPose>& poses, double scale,
                              const fs::path& path) {
  std::vector<GridPose> out;
  out.reserve(poses.size());
  auto snap = [&](double v, std::size_t row) {
    const double g = v / scale;
    const double r = std::nearbyint(g);
    if (std::abs(g - r) > 1e-6) {
      throw ParseError(ParseErrorKind::inconsistent_graph, path, row + 1,
                       "ground truth is not on the grid");
    }
    return static_cast<std::int64_t>(r);
  };
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const double q = std::nearbyint(poses[i].heading / kHalfPi);
    out.push_back({snap(poses[i].x, i), snap(poses[i].y, i),
                   normalize_quarter_turns(static_cast<int>(q))});
  }
  return out;
}

}  // namespace

MultiGraph parse_multig2o(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw IoError("not a directory", root);
  }
  std::vector<std::pair<std::size_t, fs::path>> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    std::smatch m;
    const auto name = entry.path().filename().string();
    if (entry.is_directory() && std::regex_match(name, m, agent_dir_pattern())) {
      dirs.emplace_back(std::stoull(m[1].str()), entry.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    if (dirs[i].first != i + 1) {
      throw ParseError(ParseErrorKind::non_contiguous_agents, root, 0,
                       "expected agent" + std::to_string(i + 1) + ", found " +
                           dirs[i].second.filename().string());
    }
  }

  const fs::path inter_path = root / "inter_agent_lc.dat";
  if (!fs::is_regular_file(inter_path, ec)) {
    throw ParseError(ParseErrorKind::missing_inter_lc_file, inter_path, 0, "");
  }

  MultiGraph multi;
  std::vector<std::vector<ScaledPose>> truths(dirs.size());
  bool scale_known = false;
  for (std::size_t a = 0; a < dirs.size(); ++a) {
    const fs::path g2o = dirs[a].second / "posegraph.g2o";
    if (!fs::is_regular_file(g2o, ec)) {
      throw ParseError(ParseErrorKind::missing_posegraph, g2o, 0, "");
    }
    multi.agents.push_back(agent_from_g2o(g2o));
    const fs::path tum = dirs[a].second / (agent_dir_name(a) + "_GT.tum");
    if (fs::is_regular_file(tum, ec)) {
      truths[a] = read_tum(tum);
      if (truths[a].size() != multi.agents[a].estimate.size()) {
        throw ParseError(ParseErrorKind::inconsistent_graph, tum, 0,
                         "ground truth has " + std::to_string(truths[a].size()) +
                             " rows for " + std::to_string(multi.agents[a].estimate.size()) +
                             " vertices");
      }
      if (!scale_known && truths[a].size() >= 2) {
        // Consecutive ground-truth poses are exactly one grid unit apart.
        multi.scale = std::hypot(truths[a][1].x - truths[a][0].x, truths[a][1].y - truths[a][0].y);
        scale_known = multi.scale > 0.0;
      }
    }
  }
  for (std::size_t a = 0; a < dirs.size(); ++a) {
    if (!truths[a].empty()) {
      multi.agents[a].ground_truth =
          to_grid(truths[a], multi.scale, dirs[a].second / (agent_dir_name(a) + "_GT.tum"));
    }
  }

  for (const auto& rec : read_records(inter_path)) {
    FieldReader r(inter_path, rec);
    r.expect_count(kInterTokens, "inter-agent row");
    InterAgentEdge e;
    const std::size_t a1 = r.index(0);
    const std::size_t a2 = r.index(2);
    if (a1 < 1 || a2 > multi.agents.size() || a1 >= a2) {
      r.fail(ParseErrorKind::inconsistent_graph,
             "agents must satisfy 1 <= A1 < A2 <= " + std::to_string(multi.agents.size()));
    }
    e.agent_a = a1 - 1;
    e.node_a = r.index(1);
    e.agent_b = a2 - 1;
    e.node_b = r.index(3);
    if (e.node_a >= multi.agents[e.agent_a].node_count() ||
        e.node_b >= multi.agents[e.agent_b].node_count()) {
      r.fail(ParseErrorKind::inconsistent_graph, "node index out of range");
    }
    e.meas = r.measurement(4);
    multi.inter_lc.push_back(e);
  }
  return multi;
}

}  // namespace posegen
