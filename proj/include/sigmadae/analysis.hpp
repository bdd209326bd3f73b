#pragma once

// The whole structural pipeline in one call.

#include "sigmadae/btf.hpp"
#include "sigmadae/codelist.hpp"
#include "sigmadae/ql.hpp"
#include "sigmadae/scheme.hpp"
#include "sigmadae/sigma.hpp"

namespace sigmadae {

struct Analysis {
  DaeModel model;
  SignatureMatrix sigma;
  Transversal hvt;
  GlobalOffsets offsets;
  JacobianPattern pattern;
  StructuralMetrics metrics;
  BlockPartition coarse;
  BlockPartition fine;
  LocalOffsets local;
  QlReport ql;
  InitSets block_init;
  InitSets basic_init;

  SchemeInputs scheme_inputs(SchemeMode mode) const;
  /// Schedule over [k_min, k_max]; k_min defaults to -max d_j.
  Schedule schedule(SchemeMode mode, int k_max) const;
  Schedule schedule(SchemeMode mode, int k_min, int k_max) const;
  int first_stage() const;
};

/// Throws StructurallyIllPosed when Sigma has no finite transversal.
Analysis analyze(DaeModel model);

}  // namespace sigmadae
