// Copyright 2026 The spdeac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "spdeac/grid.hpp"

namespace spdeac {

/// Grid on which pointwise nonlinearities are evaluated.
///
/// With dealiasing the evaluation grid has 2n points per axis: coefficients are zero-padded
/// (Nyquist modes of the coarse grid dropped), products are formed at the fine nodes and the
/// result is truncated back to the modes |k_i| < n/2. The pad/truncate pair is adjoint in L^2,
/// so the truncated nonlinearity is the exact gradient of the fine-grid quadrature of its
/// primitive. Without dealiasing the evaluation grid is the coarse grid itself.
class EvaluationGrid {
 public:
  EvaluationGrid(GridSpec grid, bool dealias);

  const GridSpec& grid() const noexcept { return grid_; }
  const GridSpec& eval_grid() const noexcept { return eval_grid_; }
  bool dealias() const noexcept { return dealias_; }
  std::size_t eval_size() const noexcept { return eval_grid_.size(); }
  /// Trapezoid weight on the evaluation grid.
  double eval_cell_volume() const noexcept { return eval_grid_.cell_volume(); }

  /// Nodal values on the evaluation grid of the interpolant of c.
  std::vector<double> to_eval(const SpectralCoeffs& c) const;
  /// Coefficients on the coarse grid of the evaluation-grid values (truncated when dealiasing).
  SpectralCoeffs from_eval(std::span<const double> values) const;

 private:
  GridSpec grid_;
  GridSpec eval_grid_;
  bool dealias_;
  std::vector<std::pair<std::size_t, std::size_t>> retained_;  // (coarse, fine) flat indices, no Nyquist
};

}  // namespace spdeac
