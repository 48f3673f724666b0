#pragma once

#include <cstdint>

namespace otfs {

/// Per-stage ledger of complex-by-complex multiplications executed by the
/// receiver chain. Only full complex*complex products (and complex divisions)
/// are tallied; real scalings and additions are free, and multiplications by
/// known-unit diagonals are never performed in the first place.
///
/// Counting is enabled by passing a non-null pointer through the call chain.
/// Defining OTFS_NO_CM_COUNT compiles every tally out for clean benchmarks.
struct CmCounter {
    std::uint64_t assemble = 0;     // operator assembly HH^H + nsr*I
    std::uint64_t factor_core = 0;  // banded LU of the leading core block
    std::uint64_t strips = 0;       // forward substitutions for the E/V strips
    std::uint64_t schur = 0;        // corner Schur complement and its LU
    std::uint64_t solve_lower = 0;  // quasi-banded forward substitution
    std::uint64_t solve_upper = 0;  // quasi-banded backward substitution
    std::uint64_t adjoint = 0;      // channel adjoint H^H applied to a vector
    std::uint64_t demod = 0;        // matched-filter FFT butterflies

    std::uint64_t factor_total() const { return factor_core + strips + schur; }
    std::uint64_t solve_total() const { return solve_lower + solve_upper; }
    std::uint64_t total() const {
        return assemble + factor_core + strips + schur + solve_lower + solve_upper +
               adjoint + demod;
    }

    void merge(const CmCounter& o) {
        assemble += o.assemble;
        factor_core += o.factor_core;
        strips += o.strips;
        schur += o.schur;
        solve_lower += o.solve_lower;
        solve_upper += o.solve_upper;
        adjoint += o.adjoint;
        demod += o.demod;
    }
};

#ifdef OTFS_NO_CM_COUNT
inline void cm_add(CmCounter*, std::uint64_t CmCounter::*, std::uint64_t) {}
#else
inline void cm_add(CmCounter* c, std::uint64_t CmCounter::*stage, std::uint64_t n) {
    if (c) c->*stage += n;
}
#endif

} // namespace otfs
