#pragma once

namespace commscape::parallel {

/// Caps the worker count used by every OpenMP kernel. Values < 1 restore the
/// default (all available cores).
void set_thread_count(int threads);
int thread_count();

}  // namespace commscape::parallel
