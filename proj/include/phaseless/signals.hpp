#pragma once

// Real bandlimited test signals with exact ground truth. Bandwidths follow
// the convention type(f) <= pi b.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phaseless/bessel.hpp"
#include "phaseless/errors.hpp"
#include "phaseless/magnitudes.hpp"

namespace phaseless
{
    struct TestSignal
    {
        std::string name;
        double b = 0.0;
        std::function<double(double)> eval;
        std::string description;

        double operator()(double x) const { return eval(x); }
    };

    inline TestSignal negate(TestSignal sig)
    {
        auto inner = std::move(sig.eval);
        sig.eval = [inner = std::move(inner)](double x) { return -inner(x); };
        sig.name = "-" + sig.name;
        return sig;
    }

    /// x -> J_1(x + shift). J_1 has exponential type 1, so b = 1/pi.
    inline TestSignal bessel_j1_shifted(double shift = 20.0)
    {
        return {"bessel_j1_shifted", 1.0 / std::numbers::pi, [shift](double x) { return bessel_j1(x + shift); },
                "J_1(x + " + format_shortest(shift) + ")"};
    }

    /// x -> sum_i amp_i sin(2 pi freq_i x + phase_i), b = 2 max freq_i.
    inline TestSignal multitone(std::span<const double> freqs, std::span<const double> amps,
                                std::span<const double> phases)
    {
        if (freqs.empty())
            throw EmptySpec("multitone: no tones given");
        if (amps.size() != freqs.size() || phases.size() != freqs.size())
            throw InvalidConfig("multitone: frequency, amplitude and phase arrays differ in length");
        double fmax = 0.0;
        for (double f : freqs)
        {
            if (!(f > 0.0))
                throw InvalidConfig("multitone: frequencies must be positive");
            fmax = std::max(fmax, f);
        }
        std::vector<double> f(freqs.begin(), freqs.end());
        std::vector<double> a(amps.begin(), amps.end());
        std::vector<double> p(phases.begin(), phases.end());
        auto eval = [f = std::move(f), a = std::move(a), p = std::move(p)](double x) {
            double sum = 0.0;
            for (std::size_t i = 0; i < f.size(); ++i)
                sum += a[i] * std::sin(2.0 * std::numbers::pi * f[i] * x + p[i]);
            return sum;
        };
        return {"multitone", 2.0 * fmax, std::move(eval), std::to_string(freqs.size()) + " tones"};
    }

    namespace detail
    {
        // Uniform [0, 1) from the top 53 bits; identical on every platform.
        inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
    }  // namespace detail

    /// Eight fixed tones below 0.18 cycles per unit (b = 0.36) with phases drawn
    /// from `seed`. Stand-in for a recorded audio excerpt.
    inline TestSignal multitone_preset(std::uint64_t seed = 1)
    {
        static constexpr double freqs[] = {0.021, 0.043, 0.062, 0.087, 0.104, 0.131, 0.152, 0.18};
        static constexpr double amps[] = {1.0, 0.8, 0.9, 0.5, 0.6, 0.4, 0.35, 0.25};
        std::mt19937_64 rng(seed);
        std::vector<double> phases;
        for (std::size_t i = 0; i < std::size(freqs); ++i)
            phases.push_back(2.0 * std::numbers::pi * detail::unit_uniform(rng));
        TestSignal sig = multitone(freqs, amps, phases);
        sig.name = "multitone";
        sig.description = "8-tone preset, seed " + std::to_string(seed);
        return sig;
    }

    /// Random tone set: frequencies uniform in [0.1, 1] * max_freq, amplitudes
    /// in [0.2, 1], phases in [0, 2 pi).
    inline TestSignal random_multitone(std::uint64_t seed, int tones, double max_freq)
    {
        if (tones < 1)
            throw EmptySpec("random_multitone: need at least one tone");
        std::mt19937_64 rng(seed);
        std::vector<double> f, a, p;
        for (int i = 0; i < tones; ++i)
        {
            f.push_back(max_freq * (0.1 + 0.9 * detail::unit_uniform(rng)));
            a.push_back(0.2 + 0.8 * detail::unit_uniform(rng));
            p.push_back(2.0 * std::numbers::pi * detail::unit_uniform(rng));
        }
        return multitone(f, a, p);
    }

    /// x -> sin(pi (x + 1/4)), type pi, b = 1.
    inline TestSignal shifted_sine()
    {
        return {"sine", 1.0, [](double x) { return std::sin(std::numbers::pi * (x + 0.25)); }, "sin(pi (x + 1/4))"};
    }

    /// sin(pi(x + 1/4)) and cos(pi(x + 1/4)): both of type pi (b = 1), equal in
    /// absolute value at every half-integer, i.e. at the critical rate s = 2b = 2.
    inline std::pair<TestSignal, TestSignal> counterexample_pair()
    {
        TestSignal first = shifted_sine();
        first.name = "sin_quarter";
        TestSignal second{"cos_quarter", 1.0, [](double x) { return std::cos(std::numbers::pi * (x + 0.25)); },
                          "cos(pi (x + 1/4))"};
        return {std::move(first), std::move(second)};
    }

    /// a_k = |f(k/s)| for k in [-M, M].
    inline MagnitudeSamples sample_magnitudes(const TestSignal& sig, double s, int M)
    {
        if (!(s > 0.0))
            throw InvalidConfig("sample_magnitudes: s must be positive");
        if (M < 2)
            throw InvalidConfig("sample_magnitudes: M must be >= 2");
        std::vector<double> a;
        a.reserve(static_cast<std::size_t>(2 * M + 1));
        for (int k = -M; k <= M; ++k)
            a.push_back(std::abs(sig(k / s)));
        return MagnitudeSamples(std::move(a));
    }
}  // namespace phaseless
