#pragma once

namespace fame {

/// Selects the OpenMP kernel or the serial reference path of an operation.
/// Both paths produce identical results; the serial one exists for testing
/// and benchmarking.
enum class Execution { Serial, Parallel };

/// Caps the OpenMP worker count; values < 1 restore the runtime default.
void set_worker_count(int workers);
[[nodiscard]] int worker_count();

}  // namespace fame
