// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#include "spdeac/dealias.hpp"

#include "spdeac/errors.hpp"
#include "spdeac/spectral.hpp"

namespace spdeac {

EvaluationGrid::EvaluationGrid(GridSpec grid, bool dealias)
    : grid_(grid), eval_grid_(dealias ? GridSpec(grid.dim(), 2 * grid.n()) : grid),
      dealias_(dealias) {
  if (dealias_) {
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      if (!grid_.is_nyquist(i)) retained_.emplace_back(i, eval_grid_.flatten(grid_.wavevector(i)));
    }
  }
}

std::vector<double> EvaluationGrid::to_eval(const SpectralCoeffs& c) const {
  if (!(c.grid() == grid_)) throw InvalidArgument("grid mismatch");
  if (!dealias_) {
    ScalarField nodal = inverse_transform(c);
    return {nodal.values().begin(), nodal.values().end()};
  }
  SpectralCoeffs fine(eval_grid_);
  for (const auto& [coarse, f] : retained_) fine[f] = c[coarse];
  ScalarField nodal = inverse_transform(fine);
  return {nodal.values().begin(), nodal.values().end()};
}

SpectralCoeffs EvaluationGrid::from_eval(std::span<const double> values) const {
  if (values.size() != eval_grid_.size()) throw InvalidArgument("evaluation grid size mismatch");
  ScalarField nodal(eval_grid_, {values.begin(), values.end()});
  SpectralCoeffs fine = forward_transform(nodal);
  if (!dealias_) return fine;
  SpectralCoeffs coarse(grid_);
  for (const auto& [c, f] : retained_) coarse[c] = fine[f];
  return coarse;
}

}  // namespace spdeac
