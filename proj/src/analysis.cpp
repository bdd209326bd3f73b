#include "sigmadae/analysis.hpp"

#include <algorithm>

namespace sigmadae {

Analysis analyze(DaeModel model) {
  Analysis a;
  a.model = std::move(model);
  a.sigma = signature_matrix(a.model);
  a.hvt = highest_value_transversal(a.sigma);
  a.offsets = canonical_offsets(a.sigma, a.hvt);
  a.pattern = jacobian_pattern(a.sigma, a.offsets);
  a.metrics = structural_metrics(a.sigma, a.offsets);
  if (a.metrics.dof != a.hvt.value)
    throw std::logic_error("analyze: degrees of freedom differ from the HVT value");
  a.coarse = coarse_btf(a.pattern, a.hvt);
  a.fine = fine_btf(a.pattern, a.hvt);
  a.local = local_offsets(a.sigma, a.fine, a.offsets);
  a.ql = vectorized_ql(a.model, a.sigma, a.offsets, a.fine, a.local);
  a.block_init = fine_block_init(a.local, a.ql.gamma_block, a.fine);
  a.basic_init = basic_init_set(a.offsets, a.ql.gamma_dae);
  return a;
}

SchemeInputs Analysis::scheme_inputs(SchemeMode mode) const {
  if (mode == SchemeMode::Basic) return basic_scheme_inputs(pattern, hvt, offsets, ql);
  SchemeInputs in;
  in.pattern = pattern;
  in.part = fine;
  in.offs = offsets;
  in.local = local;
  in.gamma_eq = ql.gamma_eq;
  return in;
}

int Analysis::first_stage() const {
  return offsets.d.empty() ? 0 : -*std::max_element(offsets.d.begin(), offsets.d.end());
}

Schedule Analysis::schedule(SchemeMode mode, int k_max) const {
  return schedule(mode, first_stage(), k_max);
}

Schedule Analysis::schedule(SchemeMode mode, int k_min, int k_max) const {
  return render_schedule(k_min, k_max, mode, scheme_inputs(mode));
}

}  // namespace sigmadae
