#pragma once

// Sign-blind reconstruction of a real bandlimited f from a_k = |f(k/s)|,
// k in [-M, M], sampled at s > 2b. Work happens in the scaled variable z = s t,
// where F(z) = f(z/s) has bandwidth b/s < 1/2:
//
//   1. g_M(z)  = sum_k a_k^2 G(z - k + ic, M)  ~ F(z + ic)^2  on z = n/M, |n| <= M^2
//   2. g'_M(z) = sum_k a_k^2 G'(z - k + ic, M) ~ d/dz F(z + ic)^2
//   3. Q(n)    = sum_{k=(n-2)M}^{(n+1)M} Im(g'_M/g_M)(k/M) G*(Mn - k, M)
//              ~ integral_{n-1}^{n} Im(g'/g)(t) dt, the phase increment of g on [n-1, n]
//   4. R(0) = 0, R(n) = R(n-1) + Q(n)  ~ continuous arg g(n) - arg g(0)
//   5. f_M(z/s) = sum_{|k|<M} |g_M(k)|^{1/2} e^{i (R(k) + arg g_M(0)) / 2} G(z - k - ic, M)
//
// f_M converges to eta f with eta = +-1 undetermined.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phaseless/approx.hpp"
#include "phaseless/errors.hpp"
#include "phaseless/fft_convolve.hpp"
#include "phaseless/kernels.hpp"
#include "phaseless/magnitudes.hpp"

namespace phaseless
{
    /// Relative floor below which |g_M| on the lifting line counts as a zero.
    inline constexpr double kNearZeroThreshold = 1e-12;
    /// Imaginary part of step 5 above this fraction of max |f_M| raises a warning.
    inline constexpr double kImagResidueWarn = 1e-3;

    struct ReconstructionConfig
    {
        int M = 20;               ///< half the sample count
        double s = 1.0;           ///< sampling rate
        double b = 0.0;           ///< bandwidth, type(f) <= pi b
        double c = 0.1;           ///< imaginary offset of the lifting line
        int fine_factor = 8;      ///< output points per sample spacing
        double quad_tol = 1e-12;  ///< G* tabulation tolerance
        FftPad fft_pad = FftPad::NextFast;
        double delta = 0.1;  ///< assumed zero-free strip half-width, used only for the predicted bound

        void validate() const
        {
            if (M < 2)
                throw InvalidConfig("M must be >= 2");
            if (!(s > 0.0) || !std::isfinite(s))
                throw InvalidConfig("sampling rate s must be positive");
            if (!(b >= 0.0) || !std::isfinite(b))
                throw InvalidConfig("bandwidth b must be nonnegative");
            if (!(s > 2.0 * b))
                throw InvalidRate("sampling rate must exceed twice the bandwidth (s > 2b)");
            if (!(c > 0.0) || !std::isfinite(c))
                throw InvalidConfig("imaginary offset c must be positive");
            if (fine_factor < 1)
                throw InvalidConfig("fine factor must be >= 1");
            if (!(quad_tol > 0.0))
                throw InvalidConfig("quadrature tolerance must be positive");
            if (!(delta > 0.0))
                throw InvalidConfig("delta must be positive");
        }

        BoundInputs bound_inputs() const
        {
            BoundInputs inp;
            inp.M = M;
            inp.b = b;
            inp.s = s;
            inp.c = c;
            inp.delta = delta;
            return inp;
        }
    };

    /// g_M and g'_M on z = n/M, n in [-M^2, M^2].
    struct FineGrid
    {
        int M = 0;
        double s = 1.0;
        double c = 0.0;
        std::vector<cplx> g;
        std::vector<cplx> gprime;

        int last() const noexcept { return M * M; }
        cplx g_at(int n) const { return g.at(static_cast<std::size_t>(n + last())); }
        cplx gprime_at(int n) const { return gprime.at(static_cast<std::size_t>(n + last())); }
    };

    /// Q on [-(M-2), M-1] and R on [-(M-1), M-1].
    struct PhaseTrack
    {
        int M = 0;
        std::vector<double> Q;
        std::vector<double> R;

        int q_first() const noexcept { return -(M - 2); }
        int q_last() const noexcept { return M - 1; }
        int r_first() const noexcept { return -(M - 1); }
        int r_last() const noexcept { return M - 1; }

        double q(int n) const { return Q.at(static_cast<std::size_t>(n - q_first())); }
        double r(int n) const { return R.at(static_cast<std::size_t>(n - r_first())); }
    };

    struct Diagnostics
    {
        double min_abs_g = 0.0;  ///< over the lifting line; proxy for distance to complex zeros
        double max_abs_g = 0.0;
        double imag_residue = 0.0;       ///< max |Im f_M| over the error window, before discarding
        double imag_residue_edge = 0.0;  ///< same, over the whole output grid (edges are not reliable)
        double predicted_rate = 0.0;
        double predicted_offset = 0.0;
        double predicted_bound = 0.0;  ///< exp(-rate M + offset), unit constant
        std::optional<double> fitted_decay_rate;
        std::vector<std::string> warnings;
    };

    struct ReconstructionResult
    {
        int M = 0;
        int fine_factor = 1;
        double s = 1.0;
        std::vector<double> grid;    ///< abscissae t = z/s, z = j / fine_factor
        std::vector<double> values;  ///< Re f_M(t)
        bool sign_resolved = false;  ///< always false: f is determined up to +-1
        std::optional<int> eta_hint;
        Diagnostics diagnostics;

        int last_index() const noexcept { return (M - 1) * fine_factor; }
    };

    /// I_{r,M} = [-(floor(r(M-1)) - 1), floor(r(M-1)) - 1] with r = num/den.
    struct ErrorDomain
    {
        int num = 1;
        int den = 2;
        int M = 2;

        int half_width() const { return (num * (M - 1)) / den - 1; }

        /// I_{1/2, M+1}, the error window for a reconstruction with parameter M.
        static ErrorDomain for_reconstruction(int M) { return {1, 2, M + 1}; }
    };

    namespace detail
    {
        inline std::vector<cplx> squared_weights(const MagnitudeSamples& mags)
        {
            std::vector<cplx> w;
            w.reserve(mags.size());
            for (double a : mags.values())
                w.emplace_back(a * a, 0.0);
            return w;
        }

        inline void check_consistent(const ReconstructionConfig& cfg, const MagnitudeSamples& mags)
        {
            cfg.validate();
            if (mags.M() != cfg.M)
                throw InvalidConfig("magnitude count " + std::to_string(mags.size()) + " does not match 2M+1 for M=" +
                                    std::to_string(cfg.M));
        }

        inline FineGrid empty_grid(const ReconstructionConfig& cfg)
        {
            FineGrid grid;
            grid.M = cfg.M;
            grid.s = cfg.s;
            grid.c = cfg.c;
            return grid;
        }
    }  // namespace detail

    /// Step 1: g_M on the fine grid.
    inline FineGrid step1_lift(const ReconstructionConfig& cfg, const MagnitudeSamples& mags)
    {
        detail::check_consistent(cfg, mags);
        const auto weights = detail::squared_weights(mags);
        const int M = cfg.M;
        const double c = cfg.c;
        FineGrid grid = detail::empty_grid(cfg);
        grid.g = FractionalConvolver(weights, M, cfg.fft_pad).apply([M, c](double x) { return eval_G(cplx(x, c), M); });
        return grid;
    }

    /// Step 2: fills g'_M on the same grid.
    inline FineGrid step2_lift_deriv(const ReconstructionConfig& cfg, const MagnitudeSamples& mags, FineGrid grid)
    {
        detail::check_consistent(cfg, mags);
        const auto weights = detail::squared_weights(mags);
        const int M = cfg.M;
        const double c = cfg.c;
        grid.gprime = FractionalConvolver(weights, M, cfg.fft_pad).apply([M, c](double x) {
            return eval_G_deriv(cplx(x, c), M);
        });
        return grid;
    }

    /// Steps 1 and 2 sharing one weight transform.
    inline FineGrid lift(const ReconstructionConfig& cfg, const MagnitudeSamples& mags)
    {
        detail::check_consistent(cfg, mags);
        const auto weights = detail::squared_weights(mags);
        const int M = cfg.M;
        const double c = cfg.c;
        const FractionalConvolver conv(weights, M, cfg.fft_pad);
        FineGrid grid = detail::empty_grid(cfg);
        grid.g = conv.apply([M, c](double x) { return eval_G(cplx(x, c), M); });
        grid.gprime = conv.apply([M, c](double x) { return eval_G_deriv(cplx(x, c), M); });
        return grid;
    }

    struct LineExtent
    {
        double min_abs = 0.0;
        double max_abs = 0.0;
    };

    inline LineExtent line_extent(const FineGrid& grid)
    {
        LineExtent e{std::numeric_limits<double>::infinity(), 0.0};
        for (const cplx& v : grid.g)
        {
            const double a = std::abs(v);
            e.min_abs = std::min(e.min_abs, a);
            e.max_abs = std::max(e.max_abs, a);
        }
        if (grid.g.empty())
            e.min_abs = 0.0;
        return e;
    }

    /// Step 3: phase increments Q(n) for n in [-(M-2), M-1]. Q(n) integrates
    /// Im(g'/g) over [n-1, n] (scaled units) with G* weights.
    /// Throws NearZeroOnLine when min |g_M| < 1e-12 max |g_M|.
    inline PhaseTrack step3_phase_increments(const FineGrid& grid, const GStarTable& table)
    {
        const int M = grid.M;
        if (table.M() != M)
            throw InvalidConfig("G* table was built for M=" + std::to_string(table.M()) + ", grid has M=" +
                                std::to_string(M));
        const std::size_t expected = static_cast<std::size_t>(2 * M * M + 1);
        if (grid.g.size() != expected || grid.gprime.size() != expected)
            throw InvalidConfig("fine grid arrays must hold 2M^2+1 values");

        const LineExtent extent = line_extent(grid);
        if (extent.min_abs < kNearZeroThreshold * extent.max_abs)
            throw NearZeroOnLine("|g_M| drops to " + format_shortest(extent.min_abs) + " (max " +
                                 format_shortest(extent.max_abs) +
                                 ") on the lifting line; choose a different offset c");

        std::vector<double> log_deriv_im(grid.g.size(), 0.0);
        if (extent.max_abs > 0.0)
            for (std::size_t i = 0; i < grid.g.size(); ++i)
                log_deriv_im[i] = (grid.gprime[i] / grid.g[i]).imag();

        PhaseTrack track;
        track.M = M;
        track.Q.reserve(static_cast<std::size_t>(2 * M - 2));
        const int offset = M * M;
        for (int n = -(M - 2); n <= M - 1; ++n)
        {
            double sum = 0.0;
            for (int k = (n - 2) * M; k <= (n + 1) * M; ++k)
                sum += log_deriv_im[static_cast<std::size_t>(k + offset)] * table[M * n - k];
            track.Q.push_back(sum);
        }
        return track;
    }

    /// Step 4: R(0) = 0, R(n) = R(n-1) + Q(n) upward, R(n-1) = R(n) - Q(n) downward.
    inline PhaseTrack step4_accumulate(PhaseTrack track)
    {
        const int M = track.M;
        if (track.Q.size() != static_cast<std::size_t>(2 * M - 2))
            throw InvalidConfig("phase track: Q must cover [-(M-2), M-1]");
        track.R.assign(static_cast<std::size_t>(2 * M - 1), 0.0);
        auto R = [&](int n) -> double& { return track.R[static_cast<std::size_t>(n + M - 1)]; };
        R(0) = 0.0;
        for (int n = 1; n <= M - 1; ++n)
            R(n) = R(n - 1) + track.q(n);
        for (int n = 0; n >= -(M - 2); --n)
            R(n - 1) = R(n) - track.q(n);
        return track;
    }

    /// Step 5: resynthesis on z = j / fine_factor, |j| <= fine_factor (M-1).
    inline ReconstructionResult step5_resynthesize(const ReconstructionConfig& cfg, const FineGrid& grid,
                                                   const PhaseTrack& track)
    {
        const int M = cfg.M;
        const int N = cfg.fine_factor;
        if (grid.M != M || track.M != M)
            throw InvalidConfig("step 5: grid, phase track and config disagree on M");
        if (track.R.size() != static_cast<std::size_t>(2 * M - 1))
            throw InvalidConfig("step 5: phase track has no accumulated phase");

        double anchor = std::arg(grid.g_at(0));
        if (anchor == -std::numbers::pi)
            anchor = std::numbers::pi;  // principal branch (-pi, pi]

        std::vector<cplx> weights;
        weights.reserve(static_cast<std::size_t>(2 * M - 1));
        for (int k = -(M - 1); k <= M - 1; ++k)
        {
            const double modulus = std::sqrt(std::abs(grid.g_at(k * M)));
            weights.push_back(modulus * std::exp(cplx(0.0, 0.5 * (track.r(k) + anchor))));
        }

        const double c = cfg.c;
        const auto complex_values = FractionalConvolver(weights, N, cfg.fft_pad).apply([M, c](double x) {
            return eval_G(cplx(x, -c), M);
        });

        ReconstructionResult result;
        result.M = M;
        result.fine_factor = N;
        result.s = cfg.s;
        const int last = result.last_index();
        result.grid.reserve(complex_values.size());
        result.values.reserve(complex_values.size());
        const int interior = std::max(0, ErrorDomain::for_reconstruction(M).half_width()) * N;
        double max_abs = 0.0;
        double max_imag = 0.0;
        double max_imag_edge = 0.0;
        for (int j = -last; j <= last; ++j)
        {
            const cplx v = complex_values[static_cast<std::size_t>(j + last)];
            result.grid.push_back(static_cast<double>(j) / N / cfg.s);
            result.values.push_back(v.real());
            max_abs = std::max(max_abs, std::abs(v.real()));
            max_imag_edge = std::max(max_imag_edge, std::abs(v.imag()));
            if (std::abs(j) <= interior)
                max_imag = std::max(max_imag, std::abs(v.imag()));
        }

        Diagnostics& diag = result.diagnostics;
        const LineExtent extent = line_extent(grid);
        diag.min_abs_g = extent.min_abs;
        diag.max_abs_g = extent.max_abs;
        diag.imag_residue = max_imag;
        diag.imag_residue_edge = max_imag_edge;
        const RateBound bound = main_rate_bound(cfg.bound_inputs());
        diag.predicted_rate = bound.rate;
        diag.predicted_offset = bound.offset;
        diag.predicted_bound = bound.at(M);
        if (max_imag > kImagResidueWarn * max_abs)
            diag.warnings.push_back("imaginary residue " + format_shortest(max_imag) + " exceeds " +
                                    format_shortest(kImagResidueWarn) + " of max |f_M| (" + format_shortest(max_abs) +
                                    ")");
        return result;
    }

    /// Steps 1 through 5 with a caller-supplied G* table.
    inline ReconstructionResult reconstruct(const ReconstructionConfig& cfg, const MagnitudeSamples& mags,
                                            const GStarTable& table)
    {
        const FineGrid grid = lift(cfg, mags);
        const PhaseTrack track = step4_accumulate(step3_phase_increments(grid, table));
        return step5_resynthesize(cfg, grid, track);
    }

    /// Steps 1 through 5, with G* taken from the process-wide cache.
    inline ReconstructionResult reconstruct(const ReconstructionConfig& cfg, const MagnitudeSamples& mags)
    {
        detail::check_consistent(cfg, mags);
        return reconstruct(cfg, mags, *cached_G_star(cfg.M, cfg.quad_tol));
    }

    struct SignedError
    {
        double error = 0.0;
        int eta = 1;
    };

    /// min over eta = +-1 of max |f_M - eta f| over the grid points inside
    /// domain / s. Ties resolve to eta = +1.
    inline SignedError worst_case_error(const ReconstructionResult& result, const std::function<double(double)>& reference,
                                        const ErrorDomain& domain)
    {
        const int L = domain.half_width();
        if (L < 0)
            throw DomainMismatch("error domain is empty");
        if (L > result.M - 1)
            throw DomainMismatch("error domain [-" + std::to_string(L) + ", " + std::to_string(L) +
                                 "] exceeds the reconstructed range of half-width " + std::to_string(result.M - 1));
        const int last = result.last_index();
        const int span = L * result.fine_factor;
        double plus = 0.0;
        double minus = 0.0;
        for (int j = -span; j <= span; ++j)
        {
            const auto idx = static_cast<std::size_t>(j + last);
            const double ref = reference(result.grid[idx]);
            const double v = result.values[idx];
            plus = std::max(plus, std::abs(v - ref));
            minus = std::max(minus, std::abs(v + ref));
        }
        return minus < plus ? SignedError{minus, -1} : SignedError{plus, 1};
    }

    /// Least-squares slope of ln(error) against M.
    inline double fit_log_slope(std::span<const double> Ms, std::span<const double> errors)
    {
        if (Ms.size() != errors.size() || Ms.size() < 2)
            throw InvalidConfig("fit_log_slope: need at least two matching points");
        const double n = static_cast<double>(Ms.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < Ms.size(); ++i)
        {
            const double x = Ms[i];
            const double y = std::log(errors[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
}  // namespace phaseless
