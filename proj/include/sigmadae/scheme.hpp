#pragma once

// Initialization sets and stage schedules for the basic and block schemes.

#include <compare>
#include <string>
#include <vector>

#include "sigmadae/btf.hpp"
#include "sigmadae/ql.hpp"
#include "sigmadae/sigma.hpp"

namespace sigmadae {

/// (index, derivative order); index is an equation or a variable.
struct DerivPair {
  int index = 0;
  int order = 0;
  friend auto operator<=>(const DerivPair&, const DerivPair&) = default;
};
using PairSet = std::vector<DerivPair>;  // kept sorted and unique

struct InitSets {
  PairSet values;   ///< J_v: derivatives needing an initial value
  PairSet guesses;  ///< J_g: derivatives needing a trial value for a solver
  std::size_t size() const { return values.size() + guesses.size(); }
  friend bool operator==(const InitSets&, const InitSets&) = default;
};

enum class Determinacy { Underdetermined, Square };
enum class Linearity { Linear, Nonlinear };
const char* to_string(Determinacy d);
const char* to_string(Linearity l);

/// The sets of one block at stage k. Equation and variable indices are the
/// original ones; `BlockPartition::row_pos`/`col_pos` give permuted positions.
struct BlockStageSets {
  int block = 0;
  PairSet equations;           ///< I_{k,l}
  PairSet unknowns;            ///< J_{k,l}
  PairSet cross_block_inputs;  ///< members of J_{k,>l} used by I_{k,l}
};

struct StageSets {
  int stage = 0;
  std::vector<BlockStageSets> blocks;  ///< in block order 0..p-1
  /// J_{<k} as a bound: x_j^(r) is known before stage k iff 0 <= r < prior_bound[j].
  std::vector<int> prior_bound;
};

struct StageClass {
  bool skip = false;  ///< k_l < -max c_hat: nothing to solve, unknowns are given
  Determinacy determinacy = Determinacy::Square;
  Linearity linearity = Linearity::Linear;
};

struct StageTask {
  int stage = 0;
  int block = 0;  ///< 0-based block index
  int local_stage = 0;
  PairSet equations;
  PairSet unknowns;
  PairSet cross_block_inputs;
  std::vector<int> prior_bound;
  bool given = false;  ///< no equations; unknowns come from the initialization
  Determinacy determinacy = Determinacy::Square;
  Linearity linearity = Linearity::Linear;
};

enum class SchemeMode { Basic, Block };
const char* to_string(SchemeMode m);

struct Schedule {
  SchemeMode mode = SchemeMode::Block;
  int k_min = 0;
  int k_max = -1;
  std::vector<StageTask> tasks;  ///< stage ascending, blocks p-1..0 within a stage
};

/// {(j,r) : 0 <= r <= d_j - gamma}, all classified as guesses.
InitSets basic_init_set(const GlobalOffsets& offs, bool gamma_dae);

/// Per block, local stages q = -max d_hat .. -gamma_l: unknowns at local
/// stages below -max c_hat need values, the rest need guesses.
InitSets fine_block_init(const LocalOffsets& local, const std::vector<bool>& gamma_block,
                         const BlockPartition& part);

StageSets stage_sets(int k, const JacobianPattern& pattern, const BlockPartition& part,
                     const GlobalOffsets& offs);

StageClass classify_stage(int k, int l, const BlockPartition& part, const GlobalOffsets& offs,
                          const LocalOffsets& local, const std::vector<bool>& gamma_eq);

/// All the ingredients a schedule needs, for either scheme.
struct SchemeInputs {
  JacobianPattern pattern;
  BlockPartition part;
  GlobalOffsets offs;
  LocalOffsets local;
  std::vector<bool> gamma_eq;
};

/// Single-block stand-in used by the basic scheme: one block holding every
/// equation, local offsets equal to global ones, gamma_i = global code L.
SchemeInputs basic_scheme_inputs(const JacobianPattern& pattern, const Transversal& t,
                                 const GlobalOffsets& offs, const QlReport& ql);

Schedule render_schedule(int k_min, int k_max, SchemeMode mode, const SchemeInputs& in);

/// Every derivative the schedule needs from the initialization, split as
/// values (given tasks) and guesses (nonlinear or underdetermined tasks).
InitSets schedule_init_requirements(const Schedule& schedule);

}  // namespace sigmadae
