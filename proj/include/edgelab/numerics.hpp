#pragma once

#include <complex>
#include <span>
#include <vector>

namespace edgelab {

using cplx = std::complex<double>;

// value = exp(log_mag) * phase, |phase| = 1
struct LogMagnitudePhase {
    double log_mag = 0.0;
    cplx phase{1.0, 0.0};

    static LogMagnitudePhase from_value(cplx v);
    static LogMagnitudePhase from_log(cplx log_value);
    static LogMagnitudePhase zero();

    cplx value() const;
    bool is_zero() const;
};

LogMagnitudePhase operator*(const LogMagnitudePhase& a, const LogMagnitudePhase& b);
LogMagnitudePhase conj(const LogMagnitudePhase& a);

void require_finite(cplx z, const char* what);
void require_finite(double x, const char* what);

cplx erfc_complex(cplx z);
cplx erfcx_complex(cplx z);

LogMagnitudePhase stable_sum(std::span<const LogMagnitudePhase> terms);

// Neumaier-compensated complex accumulator.
class CompensatedSum {
public:
    void add(cplx x);
    cplx result() const { return {re_ + re_c_, im_ + im_c_}; }

private:
    double re_ = 0.0, re_c_ = 0.0;
    double im_ = 0.0, im_c_ = 0.0;
};

}  // namespace edgelab
