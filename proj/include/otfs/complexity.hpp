#pragma once

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "otfs/cm_counter.hpp"
#include "otfs/grid.hpp"
#include "otfs/modem.hpp"
#include "otfs/types.hpp"

namespace otfs {

/// Parameters entering the closed-form complex-multiplication counts.
struct CmParams {
    int m = 0;     // subcarriers
    int n = 0;     // time slots
    int alpha = 1; // channel delay length
    int beta = 0;  // channel Doppler length
    int p = 1;     // path count
};

enum class CmStage {
    Assemble,     // build HH^H + nsr I
    FactorCore,   // banded LU of the leading block
    Strips,       // E and V by forward substitution
    Schur,        // corner Schur complement and its LU
    Solves,       // forward plus backward substitution
    Adjoint,      // H^H applied to the solved vector
    Demod,        // matched-filter FFTs
};

inline const char* cm_stage_name(CmStage s) {
    switch (s) {
        case CmStage::Assemble: return "assemble";
        case CmStage::FactorCore: return "factor_core";
        case CmStage::Strips: return "strips";
        case CmStage::Schur: return "schur";
        case CmStage::Solves: return "solves";
        case CmStage::Adjoint: return "adjoint";
        case CmStage::Demod: return "demod";
    }
    return "?";
}

/// Closed-form per-operation CM counts of the fast receiver.
inline double formula_table1(CmStage stage, const CmParams& prm, Waveform wf = Waveform::Otfs) {
    if (prm.m < 1 || prm.n < 1 || prm.alpha < 1 || prm.beta < 0 || prm.p < 1)
        throw ConfigError("formula_table1: invalid parameters");
    const double mn = static_cast<double>(prm.m) * prm.n;
    const double a = prm.alpha, b = prm.beta, p = prm.p;
    switch (stage) {
        case CmStage::Assemble: return (p * p - p) * (2.0 * b + 1.0) * mn + p;
        case CmStage::FactorCore: return (a * a + 2.0 * a) * mn;
        case CmStage::Strips: return a * mn - (3.0 * a * a * a + a) / 2.0;
        case CmStage::Schur: return a * a * mn - mn + 2.0 * a * a * a / 3.0;
        case CmStage::Solves: return mn * (2.0 * a - 1.0) + 3.0 * a * a / 2.0 + a / 2.0;
        case CmStage::Adjoint: return p * (b + 1.0) * mn;
        case CmStage::Demod:
            return mn / 2.0 * (wf == Waveform::Otfs ? ilog2(prm.n) : ilog2(prm.m));
    }
    return 0.0;
}

/// Direct LMMSE receiver: one demodulation FFT pass plus a dense
/// (MN)^3-order multiply-and-invert.
inline double formula_direct(int m, int n, Waveform wf) {
    const double mn = static_cast<double>(m) * n;
    const double fft = mn / 2.0 * (wf == Waveform::Otfs ? ilog2(n) : ilog2(m));
    return fft + (8.0 / 6.0) * mn * mn * mn + 2.0 * mn * mn;
}

/// Proposed receiver total (quasi-banded factorization path).
inline double formula_proposed(const CmParams& prm, Waveform wf) {
    const double mn = static_cast<double>(prm.m) * prm.n;
    const double a = prm.alpha, b = prm.beta, p = prm.p;
    const double fft = mn / 2.0 * (wf == Waveform::Otfs ? ilog2(prm.n) : ilog2(prm.m));
    return fft + mn * (2.0 * a * a + 2.0 * p * p * b + 9.0 * a - p * b - 3.0) +
           (2.0 / 3.0) * a * a * a + 2.0 * a + p;
}

// ---------------------------------------------------------------------------
// Measured-vs-analytic audit
// ---------------------------------------------------------------------------

struct AuditRow {
    std::string stage;
    std::uint64_t measured = 0;
    double analytic = 0.0;
    double ratio = 0.0;
    bool flagged = false; // measured exceeds 2x analytic
};

/// Compare an instrumented run against the closed forms, stage by stage.
/// Flags any stage whose measured count exceeds twice its analytic row.
inline std::vector<AuditRow> audit_run(const CmCounter& cm, const CmParams& prm,
                                       Waveform wf = Waveform::Otfs) {
    std::vector<AuditRow> rows;
    auto push = [&](CmStage stage, std::uint64_t measured) {
        AuditRow r;
        r.stage = cm_stage_name(stage);
        r.measured = measured;
        r.analytic = formula_table1(stage, prm, wf);
        r.ratio = r.analytic > 0.0 ? static_cast<double>(measured) / r.analytic : 0.0;
        r.flagged = static_cast<double>(measured) > 2.0 * r.analytic;
        rows.push_back(r);
    };
    push(CmStage::Assemble, cm.assemble);
    push(CmStage::FactorCore, cm.factor_core);
    push(CmStage::Strips, cm.strips);
    push(CmStage::Schur, cm.schur);
    push(CmStage::Solves, cm.solve_lower + cm.solve_upper);
    push(CmStage::Adjoint, cm.adjoint);
    push(CmStage::Demod, cm.demod);
    return rows;
}

inline void print_audit(const std::vector<AuditRow>& rows, std::ostream& os) {
    os << std::left << std::setw(14) << "stage" << std::right << std::setw(14) << "measured"
       << std::setw(14) << "analytic" << std::setw(10) << "ratio" << "\n";
    for (const auto& r : rows) {
        os << std::left << std::setw(14) << r.stage << std::right << std::setw(14) << r.measured
           << std::setw(14) << std::llround(r.analytic) << std::setw(10) << std::fixed
           << std::setprecision(3) << r.ratio << (r.flagged ? "  ** exceeds 2x" : "") << "\n";
        os.unsetf(std::ios::fixed);
    }
}

inline std::string audit_csv(const std::vector<AuditRow>& rows) {
    std::ostringstream os;
    os << "stage,measured,analytic,ratio\n";
    for (const auto& r : rows) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s,%llu,%.6g,%.6g\n", r.stage.c_str(),
                      static_cast<unsigned long long>(r.measured), r.analytic, r.ratio);
        os << buf;
    }
    return os.str();
}

} // namespace otfs
