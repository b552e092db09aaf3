#include "dropzone/deployment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <queue>

namespace dropzone {

void DeploymentConfig::validate() const {
  if (!(t_th >= 0.0 && t_th <= 1.0)) raise(Errc::config_invalid, "t_th must lie in [0, 1]");
  if (!(r_max > 0.0)) raise(Errc::config_invalid, "r_max must be positive");
  if (!(lambda >= 0.0 && lambda <= 1.0)) raise(Errc::config_invalid, "lambda must lie in [0, 1]");
  if (k < 1) raise(Errc::config_invalid, "k must be >= 1");
  if (min_separation < 0.0) raise(Errc::config_invalid, "min_separation must be >= 0");
}

std::vector<DeploymentCandidate> candidates(const Raster& trav, double goal_x, double goal_y,
                                            const DeploymentConfig& cfg) {
  cfg.validate();
  const GridSpec& spec = trav.spec();
  if (!spec.bin(goal_x, goal_y)) {
    raise(Errc::goal_out_of_bounds, "goal lies outside the traversability grid");
  }

  std::vector<DeploymentCandidate> out;
  for (int row = 0; row < spec.nrows; ++row) {
    for (int col = 0; col < spec.ncols; ++col) {
      if (!trav.has_data(row, col)) continue;
      double t = trav(row, col);
      if (t < cfg.t_th) continue;
      auto [x, y] = spec.cell_center(row, col);
      double d = std::hypot(x - goal_x, y - goal_y);
      if (d > cfg.r_max) continue;
      DeploymentCandidate c;
      c.row = row;
      c.col = col;
      c.x = x;
      c.y = y;
      c.score_t = t;
      c.goal_distance = d;
      c.objective = (1.0 - cfg.lambda) * t + cfg.lambda * (1.0 - d / cfg.r_max);
      out.push_back(c);
    }
  }
  return out;
}

std::vector<DeploymentCandidate> select_top_k(std::vector<DeploymentCandidate> cands,
                                              const DeploymentConfig& cfg) {
  cfg.validate();
  std::sort(cands.begin(), cands.end(),
            [](const DeploymentCandidate& a, const DeploymentCandidate& b) {
              if (a.objective != b.objective) return a.objective > b.objective;
              if (a.goal_distance != b.goal_distance) return a.goal_distance < b.goal_distance;
              if (a.row != b.row) return a.row < b.row;
              return a.col < b.col;
            });

  std::vector<DeploymentCandidate> selected;
  for (const auto& c : cands) {
    if (selected.size() >= static_cast<std::size_t>(cfg.k)) break;
    bool too_close = false;
    for (const auto& s : selected) {
      if (std::hypot(c.x - s.x, c.y - s.y) < cfg.min_separation) {
        too_close = true;
        break;
      }
    }
    if (!too_close) selected.push_back(c);
  }
  return selected;
}

bool reachable(const Raster& trav, CellIndex from, CellIndex to, double t_th) {
  const GridSpec& spec = trav.spec();
  if (!spec.in_bounds(from.row, from.col) || !spec.in_bounds(to.row, to.col)) {
    raise(Errc::out_of_bounds, "reachability endpoints must lie inside the grid");
  }
  auto passes = [&](int row, int col) {
    return trav.has_data(row, col) && trav(row, col) >= t_th;
  };
  if (!passes(from.row, from.col) || !passes(to.row, to.col)) return false;
  if (from == to) return true;

  std::vector<uint8_t> visited(static_cast<std::size_t>(spec.nrows) * spec.ncols, 0);
  auto idx = [&](int row, int col) { return static_cast<std::size_t>(row) * spec.ncols + col; };
  std::queue<CellIndex> frontier;
  frontier.push(from);
  visited[idx(from.row, from.col)] = 1;

  while (!frontier.empty()) {
    CellIndex cur = frontier.front();
    frontier.pop();
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        int r = cur.row + dr, c = cur.col + dc;
        if (!spec.in_bounds(r, c) || visited[idx(r, c)] || !passes(r, c)) continue;
        if (r == to.row && c == to.col) return true;
        visited[idx(r, c)] = 1;
        frontier.push({r, c});
      }
    }
  }
  return false;
}

std::vector<DeploymentCandidate> select_deployment(const Raster& trav, double goal_x,
                                                   double goal_y, const DeploymentConfig& cfg) {
  std::vector<DeploymentCandidate> cands = candidates(trav, goal_x, goal_y, cfg);
  auto goal_cell = trav.spec().bin(goal_x, goal_y);
  CellIndex goal{goal_cell->first, goal_cell->second};

  std::vector<DeploymentCandidate> reachable_cands;
  for (auto& c : cands) {
    c.reachable = reachable(trav, {c.row, c.col}, goal, cfg.t_th);
    if (c.reachable) reachable_cands.push_back(c);
  }

  std::vector<DeploymentCandidate> selected = select_top_k(std::move(reachable_cands), cfg);
  if (selected.empty()) {
    raise(Errc::no_candidates, "no reachable cell satisfies the deployment constraints");
  }
  return selected;
}

void write_zones_csv(const std::vector<DeploymentCandidate>& zones, const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(Errc::io_error, "cannot write zones file: " + path);
  out << "rank,row,col,x,y,T,goal_distance,objective,reachable\n";
  char buf[256];
  int rank = 1;
  for (const auto& z : zones) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.6g,%.6g,%.6g,%.6g,%.6g,%d\n", rank++, z.row,
                  z.col, z.x, z.y, z.score_t, z.goal_distance, z.objective, z.reachable ? 1 : 0);
    out << buf;
  }
  if (!out) raise(Errc::io_error, "write failed: " + path);
}

}  // namespace dropzone
