#pragma once

namespace trunctail {

/// Worker threads used by the OpenMP kernels (fit_path, select_k_star,
/// run_simulation). Results never depend on this value.
int thread_count() noexcept;
/// n <= 0 restores the OpenMP default.
void set_thread_count(int n) noexcept;

}  // namespace trunctail
