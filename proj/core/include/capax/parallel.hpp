#pragma once

namespace capax {

/// Applies CAPAX_THREADS (if set) to the OpenMP runtime. Returns the active thread cap.
int configure_threads_from_env();

int max_threads();

}  // namespace capax
