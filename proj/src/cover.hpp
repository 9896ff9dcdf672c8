#pragma once

#include <functional>
#include <vector>

#include "absnorm/space.hpp"

namespace absnorm::detail {

// A patch of the unit sphere: every unit vector in the patch lies within
// `radius` of `point`, measured in the space's own norm.
struct Cell {
  int face = -1;  // -1: angular arc (dim 2); otherwise the cube-face axis
  double sign = 1.0;
  Vector center;  // arc: {theta}; face: the free coordinates
  double half = 0.0;
  Vector point;
  double radius = 0.0;
};

// Hierarchical sphere cover. dim 1: the two points +-1. dim 2: arcs of the
// angular parametrisation, halved on refinement. dim >= 3: the faces of the
// cube [-1,1]^d projected radially, split into 2^(d-1) subsquares.
class SphereCover {
 public:
  explicit SphereCover(FiniteSpace space);

  int dim() const { return space_.dim(); }
  const FiniteSpace& space() const { return space_; }
  std::vector<Cell> roots() const;
  void children(const Cell& cell, std::vector<Cell>& out) const;
  long cells_at(int level) const;
  // Smallest level whose cell count reaches `resolution`.
  int level_for(long resolution) const;

 private:
  Cell arc(double theta, double half) const;
  Cell face(int axis, double sign, Vector center, double half) const;

  FiniteSpace space_;
  Vector face_spread_;  // max ||sum_{j != k} +-e_j|| for each axis k
};

struct SearchResult {
  Interval value;       // bracket of the sup (or inf) over the sphere
  Vector arg;           // centre achieving the sampled best
  Interval arg_bracket; // objective bracket at `arg`
  double margin = 0.0;  // widest per-cell bracket left at the end
  long evaluations = 0;
  int level = 0;
  bool exhausted = false;
};

// f returns a bracket of a 1-Lipschitz objective at a unit vector. The
// search refines level by level, discarding cells that cannot beat the best
// sampled value, until the gap closes, max_level is reached, or the
// evaluation budget would be exceeded.
using Objective = std::function<Interval(const Vector&)>;

SearchResult maximize(const SphereCover& cover, int max_level, const Objective& f,
                      double gap, long budget, bool parallel);
SearchResult minimize(const SphereCover& cover, int max_level, const Objective& f,
                      double gap, long budget, bool parallel);

// Every cell at the given level.
std::vector<Cell> cells_at_level(const SphereCover& cover, int level);

// Centres of every cell at the level whose cell count reaches resolution.
std::vector<Vector> sphere_samples(const FiniteSpace& space, long resolution);

int worker_count();

// Runs body(i) for i in [0, n), split across worker threads when parallel.
void parallel_for(std::size_t n, bool parallel, const std::function<void(std::size_t)>& body);

}  // namespace absnorm::detail
