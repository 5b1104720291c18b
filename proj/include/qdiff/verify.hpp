#pragma once

#include <optional>
#include <vector>

#include "qdiff/model.hpp"
#include "qdiff/types.hpp"

namespace qdiff {

struct ResidualReport {
  Index first = 0;
  /// Signed residual Delta(r Delta(x + w q x_{.-tau})) - a f(x_{.-sigma}) - b per index.
  std::vector<double> values;
  /// Sum of magnitudes entering each residual; the roundoff yardstick.
  std::vector<double> scale;
  double sup = 0.0;
  Index argmax = 0;

  Index last() const { return first + static_cast<Index>(values.size()) - 1; }
  double at(Index n) const { return values.at(static_cast<std::size_t>(n - first)); }
};

/// Pointwise residual of the equation on [from, to]. Indices 1 <= n < x.start()
/// read as 0; the default range is the largest one the window covers.
/// Throws CoverageError when a requested index needs values outside [1, x.end()],
/// PreconditionError for sigma < 0.
ResidualReport residual(const ProblemSpec& problem, const Window& x, double q_scale = 1.0,
                        std::optional<Index> from = std::nullopt, std::optional<Index> to = std::nullopt);

/// Continues x past seed.end() for `steps` indices with the explicit recurrence
///   z_{n+1} = z_n + a_n f(x_{n-sigma}) + b_n,  y_{n+1} = y_n + z_n / r_n,
///   x_{n+1} = y_{n+1} - w q_{n+1} x_{n+1-tau},
/// where y = x + w q x_{.-tau} and z = r Delta y. Needs seed.end() >= beta + 2
/// (reads below seed.start() are 0) and sigma >= 0.
Window forward_recurrence(const ProblemSpec& problem, const Window& seed, Index steps, double q_scale = 1.0);

}  // namespace qdiff
