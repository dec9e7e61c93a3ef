#pragma once

namespace drstqp {

/// Execution policy for the data-parallel kernels (support-enumeration scan,
/// multi-start descent, Monte-Carlo trials, experiment grids). Serial is the
/// reference path; Par runs the same kernel under OpenMP. Both produce
/// bit-identical results: candidates are combined with an exact total order,
/// so reduction order never matters.
enum class Exec { Serial, Par };

/// Clamp and apply a worker-count request (no-op when built without OpenMP).
void set_worker_threads(int threads);

int worker_threads();

}  // namespace drstqp
