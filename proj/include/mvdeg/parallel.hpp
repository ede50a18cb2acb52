#pragma once

namespace mvdeg {

/// Selects between the OpenMP kernel and its serial reference.
/// Both produce bit-identical results.
enum class Execution { serial, parallel };

int max_threads() noexcept;
void set_threads(int n) noexcept;

}  // namespace mvdeg
