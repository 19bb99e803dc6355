#pragma once

namespace banditrec {

// Kernels exist in a serial reference form and an OpenMP form. Both evaluate
// every output entry with the same sequential arithmetic, so results are
// bit-identical and the serial path doubles as the test oracle.
enum class Exec { Serial, Parallel };

// Thread cap for Exec::Parallel kernels and fold-level evaluation.
void set_worker_count(int workers);
int worker_count();

}  // namespace banditrec
