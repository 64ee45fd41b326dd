#pragma once

namespace memschrod {

/// Execution policy for the mode-parallel kernels. Parallel runs the loop
/// over modes with OpenMP; Serial is the reference path. Per-mode arithmetic
/// is self-contained and reductions are finished in fixed index order, so
/// both policies produce identical results.
enum class Exec { Serial, Parallel };

} // namespace memschrod
