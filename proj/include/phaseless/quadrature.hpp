#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "phaseless/errors.hpp"

namespace phaseless::quadrature
{
    struct PanelEstimate
    {
        double value;
        double error;
    };

    /// 15-point Kronrod extension of the 7-point Gauss rule on [a, b].
    template <class Func>
    PanelEstimate gauss_kronrod15(const Func& f, double a, double b)
    {
        // Kronrod abscissae; odd indices are the Gauss nodes.
        static constexpr std::array<double, 8> xk = {
            0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
        static constexpr std::array<double, 8> wk = {
            0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
        static constexpr std::array<double, 4> wg = {
            0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
            0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

        const double center = 0.5 * (a + b);
        const double half = 0.5 * (b - a);

        const double fc = f(center);
        double kronrod = wk[7] * fc;
        double gauss = wg[3] * fc;
        for (std::size_t j = 0; j < 7; ++j)
        {
            const double dx = half * xk[j];
            const double pair = f(center - dx) + f(center + dx);
            kronrod += wk[j] * pair;
            if (j % 2 == 1)
                gauss += wg[j / 2] * pair;
        }
        return {kronrod * half, std::abs((kronrod - gauss) * half)};
    }

    struct AdaptiveOptions
    {
        double abs_tol = 1e-12;
        int max_depth = 40;
    };

    namespace detail
    {
        template <class Func>
        double adaptive_panel(const Func& f, double a, double b, double tol, int depth,
                              const AdaptiveOptions& opts, std::size_t& evaluations)
        {
            const PanelEstimate est = gauss_kronrod15(f, a, b);
            evaluations += 15;
            // Below the rounding floor further bisection cannot help.
            const double rounding_floor = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(est.value);
            if (est.error <= tol || est.error <= rounding_floor)
                return est.value;
            if (depth >= opts.max_depth)
                throw QuadratureNonConvergence("adaptive quadrature exceeded depth " +
                                               std::to_string(opts.max_depth) + " on [" +
                                               std::to_string(a) + ", " + std::to_string(b) + "]");
            const double mid = 0.5 * (a + b);
            return adaptive_panel(f, a, mid, 0.5 * tol, depth + 1, opts, evaluations) +
                   adaptive_panel(f, mid, b, 0.5 * tol, depth + 1, opts, evaluations);
        }
    }  // namespace detail

    struct AdaptiveResult
    {
        double value;
        std::size_t evaluations;
    };

    /// Adaptive bisection with a G7/K15 pair. The absolute error budget is split
    /// evenly between children, so the accepted panels sum to within abs_tol.
    /// Throws QuadratureNonConvergence past max_depth.
    template <class Func>
    AdaptiveResult integrate(const Func& f, double a, double b, const AdaptiveOptions& opts = {})
    {
        std::size_t evaluations = 0;
        const double value = detail::adaptive_panel(f, a, b, opts.abs_tol, 0, opts, evaluations);
        return {value, evaluations};
    }
}  // namespace phaseless::quadrature
