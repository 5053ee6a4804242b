#pragma once

#include <string>

#include "idt/quantum.hpp"

namespace idt {

// Projective measurement onto the computational basis: d effects |i><i|.
Povm basis_target(int d);

// Symmetric informationally complete POVM: d^2 rank-one effects P_k / d
// whose projectors obey tr[P_i P_j] = 1/(d+1) for i != j. Supported for
// d = 2 (regular tetrahedron of Bloch vectors) and d = 3 (the nine
// vectors built from eta = exp(2 pi i / 3)).
Povm sic_povm(int d);

// Two-outcome degenerate von Neumann measurement on a four-level system:
// rank-two projectors onto span{|0>,|1>} and span{|2>,|3>}.
Povm degenerate_pair_target();

// Mixes every effect toward its trace share of the identity,
// E_i -> t E_i + (1 - t) tr(E_i) 1/d, for t in [0, 1]. t = 1 returns the
// measurement unchanged, t = 0 one that ignores the state entirely.
Povm lueders_mix(const Povm& povm, double t);

// Deviation of the mixed measurement from the original in the operator
// norm: max_i ||E_i - tr(E_i) 1/d||_inf, so that
// delta_linf(lueders_mix(e, t), e) = (1 - t) * lueders_mix_scale(e).
double lueders_mix_scale(const Povm& povm);

// Built-in target lookup for the command line: "basis" (uses d), "sic2",
// "sic3", "degenerate". Unknown names throw std::invalid_argument.
Povm named_target(const std::string& name, int d);

}  // namespace idt
