#pragma once

// Truncated sinc-Gaussian sampling series and their a-priori error bounds.
// The bound evaluators carry unknown multiplicative constants (C1, C2) as
// inputs; they are diagnostics, never enforced inside the operators.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "phaseless/errors.hpp"
#include "phaseless/kernels.hpp"

namespace phaseless
{
    /// Samples f(k/s), k in [-M, M], of a function of bandwidth b (type <= pi b).
    struct BandlimitedSampleSet
    {
        std::vector<cplx> samples;
        double s = 1.0;
        double b = 0.0;
        int M = 2;

        void validate() const
        {
            if (M < 2)
                throw InvalidConfig("sample set: M must be >= 2");
            if (samples.size() != static_cast<std::size_t>(2 * M + 1))
                throw InvalidConfig("sample set: expected 2M+1 samples");
            if (!(s > 0.0) || !(b >= 0.0))
                throw InvalidConfig("sample set: need s > 0 and b >= 0");
            if (!(s > b))
                throw InvalidRate("sample set: sampling rate must exceed the bandwidth");
        }

        cplx at(int k) const { return samples.at(static_cast<std::size_t>(k + M)); }
    };

    /// sum_{k=-M}^{M} f(k/s) G(z - k, M), an approximation of f(z/s).
    inline cplx sinc_gauss_interpolate(const BandlimitedSampleSet& set, cplx z)
    {
        cplx sum = 0.0;
        for (int k = -set.M; k <= set.M; ++k)
            sum += set.samples[static_cast<std::size_t>(k + set.M)] * eval_G(z - static_cast<double>(k), set.M);
        return sum;
    }

    /// Number of fine-grid samples on each side of the origin, floor(d M).
    inline int fine_grid_half_width(int M, double d) { return static_cast<int>(std::floor(d * M)); }

    /// sum_{|k| <= dM} f(k/M) G(M z - k, M) for values f(k/M), k in [-floor(dM), floor(dM)].
    inline cplx fine_grid_interpolate(std::span<const cplx> values, int M, double d, double z)
    {
        const int K = fine_grid_half_width(M, d);
        if (values.size() != static_cast<std::size_t>(2 * K + 1))
            throw InvalidConfig("fine grid: expected 2*floor(dM)+1 values, got " + std::to_string(values.size()));
        cplx sum = 0.0;
        for (int k = -K; k <= K; ++k)
            sum += values[static_cast<std::size_t>(k + K)] * eval_G(M * z - static_cast<double>(k), M);
        return sum;
    }

    struct BoundInputs
    {
        int M = 2;
        double b = 0.0;
        double s = 1.0;
        double d = 0.5;      ///< fraction of the sample window where the bound applies
        double c = 0.0;      ///< imaginary offset of the lifting line
        double delta = 0.1;  ///< half-width of the zero-free strip around the line
        double C1 = 1.0;
        double C2 = 1.0;
    };

    /// C1 M^{-1/2} exp(-(pi (1-d)/2)(1 - b/s) M + 2 pi |Im z|).
    inline double interpolation_bound(const BoundInputs& inp, double im_z)
    {
        const double pi = std::numbers::pi;
        const double exponent = -(pi * (1.0 - inp.d) / 2.0) * (1.0 - inp.b / inp.s) * inp.M + 2.0 * pi * std::abs(im_z);
        return inp.C1 / std::sqrt(static_cast<double>(inp.M)) * std::exp(exponent);
    }

    /// C2 K (M/delta)^{1/2} exp(-pi delta M / 4), K the linear-growth constant of f.
    inline double fine_grid_bound(const BoundInputs& inp, double growth_constant = 1.0)
    {
        const double pi = std::numbers::pi;
        return inp.C2 * growth_constant * std::sqrt(inp.M / inp.delta) * std::exp(-pi * inp.delta * inp.M / 4.0);
    }

    struct RateBound
    {
        double rate;    ///< min(pi/16 (1 - 2b/s), pi delta / 8)
        double offset;  ///< 4 pi c

        /// C exp(-rate M + offset).
        double at(int M, double C = 1.0) const { return C * std::exp(-rate * M + offset); }
    };

    /// Exponential rate of the end-to-end reconstruction error.
    inline RateBound main_rate_bound(const BoundInputs& inp)
    {
        const double pi = std::numbers::pi;
        if (!(inp.s > 2.0 * inp.b))
            throw InvalidRate("main_rate_bound: sampling rate must exceed twice the bandwidth (s > 2b)");
        if (!(inp.delta > 0.0))
            throw InvalidRate("main_rate_bound: zero-free strip half-width must be positive");
        const double rate = std::min(pi / 16.0 * (1.0 - 2.0 * inp.b / inp.s), pi * inp.delta / 8.0);
        return {rate, 4.0 * pi * inp.c};
    }
}  // namespace phaseless
