#pragma once

#include <string>
#include <vector>

#include "dropzone/features.hpp"
#include "dropzone/raster.hpp"

namespace dropzone {

struct DeploymentConfig {
  double t_th = 0.5;          // traversability threshold
  double r_max = 10.0;        // meters, search radius around the goal
  double lambda = 0.3;        // distance-vs-score balance
  int k = 5;                  // zones to return
  double min_separation = 1.0;  // meters between selected zones

  void validate() const;
};

struct DeploymentCandidate {
  int row = 0;
  int col = 0;
  double x = 0.0;  // cell center
  double y = 0.0;
  double score_t = 0.0;
  double goal_distance = 0.0;
  double objective = 0.0;  // (1 - lambda) T + lambda (1 - d / r_max)
  bool reachable = false;
};

/// All data cells with T >= t_th whose centers lie within r_max of the goal,
/// scored by the distance-aware objective. The goal must fall inside the
/// grid.
std::vector<DeploymentCandidate> candidates(const Raster& trav, double goal_x, double goal_y,
                                            const DeploymentConfig& cfg);

/// Greedy top-K by descending objective (ties: smaller goal distance, then
/// row-major cell index); a candidate within min_separation of an already
/// selected one is skipped.
std::vector<DeploymentCandidate> select_top_k(std::vector<DeploymentCandidate> cands,
                                              const DeploymentConfig& cfg);

/// 8-connected flood reachability across cells with defined T >= t_th.
/// from == to is reachable iff that cell itself passes.
bool reachable(const Raster& trav, CellIndex from, CellIndex to, double t_th);

/// candidates -> keep those with a path to the goal cell -> select_top_k.
/// Ranks are assigned 1..K. Throws NoCandidates when the result is empty
/// (e.g. the goal sits in a sealed low-traversability basin).
std::vector<DeploymentCandidate> select_deployment(const Raster& trav, double goal_x,
                                                   double goal_y, const DeploymentConfig& cfg);

/// zones.csv: header `rank,row,col,x,y,T,goal_distance,objective,reachable`,
/// decimals with 6 significant digits, rows in rank order.
void write_zones_csv(const std::vector<DeploymentCandidate>& zones, const std::string& path);

}  // namespace dropzone
