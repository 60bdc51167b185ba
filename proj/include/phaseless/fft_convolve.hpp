#pragma once

// Fractional-offset linear convolution on a refined grid.
//
// Given weights w_k, k in [-K, K], and a kernel phi, computes
//
//   out[n] = sum_k w_k phi(n/P - k),   n in [-K P, K P],
//
// by splitting n = p P + r (0 <= r < P). For each residue r the sum over k is
// a linear convolution of w with phi sampled at (m + r/P), m in [-2K, 2K];
// one zero-padded FFT of length L >= 4K+2 per residue computes it without
// wrap-around. The weight transform is shared across residues and kernels.

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "phaseless/errors.hpp"

namespace phaseless
{
    using cplx = std::complex<double>;

    enum class FftPad
    {
        NextFast,    ///< smallest 2^a 3^b 5^c 7^d >= minimum length
        PowerOfTwo,
    };

    inline std::size_t next_fast_len(std::size_t target, FftPad pad = FftPad::NextFast)
    {
        if (target <= 1)
            return 1;
        if (pad == FftPad::PowerOfTwo)
        {
            std::size_t n = 1;
            while (n < target)
                n <<= 1;
            return n;
        }
        for (std::size_t n = target;; ++n)
        {
            std::size_t m = n;
            for (std::size_t f : {2u, 3u, 5u, 7u})
                while (m % f == 0)
                    m /= f;
            if (m == 1)
                return n;
        }
    }

    namespace detail
    {
        // FFTW's planner is not re-entrant; execution is.
        inline std::mutex& fftw_planner_mutex()
        {
            static std::mutex m;
            return m;
        }

        inline fftw_complex* as_fftw(cplx* p) noexcept { return reinterpret_cast<fftw_complex*>(p); }
    }  // namespace detail

    /// In-place forward/backward complex DFT of one length. Backward is unscaled.
    class FftPlan
    {
    public:
        explicit FftPlan(std::size_t n) : n_(n)
        {
            std::vector<cplx> scratch(n);
            std::lock_guard lock(detail::fftw_planner_mutex());
            const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
            forward_ = fftw_plan_dft_1d(static_cast<int>(n), detail::as_fftw(scratch.data()),
                                        detail::as_fftw(scratch.data()), FFTW_FORWARD, flags);
            backward_ = fftw_plan_dft_1d(static_cast<int>(n), detail::as_fftw(scratch.data()),
                                         detail::as_fftw(scratch.data()), FFTW_BACKWARD, flags);
            if (!forward_ || !backward_)
                throw std::runtime_error("FFTW failed to create a plan");
        }

        FftPlan(const FftPlan&) = delete;
        FftPlan& operator=(const FftPlan&) = delete;

        ~FftPlan()
        {
            std::lock_guard lock(detail::fftw_planner_mutex());
            fftw_destroy_plan(forward_);
            fftw_destroy_plan(backward_);
        }

        std::size_t size() const noexcept { return n_; }

        void forward(std::span<cplx> data) const { execute(forward_, data); }
        void backward(std::span<cplx> data) const { execute(backward_, data); }

    private:
        void execute(fftw_plan plan, std::span<cplx> data) const
        {
            if (data.size() != n_)
                throw std::invalid_argument("FftPlan: buffer length mismatch");
            fftw_execute_dft(plan, detail::as_fftw(data.data()), detail::as_fftw(data.data()));
        }

        std::size_t n_;
        fftw_plan forward_ = nullptr;
        fftw_plan backward_ = nullptr;
    };

    /// Holds the transformed weights so several kernels can reuse them.
    class FractionalConvolver
    {
    public:
        FractionalConvolver(std::span<const cplx> weights, int subdivisions, FftPad pad = FftPad::NextFast)
            : half_(static_cast<int>(weights.size() / 2)), subdivisions_(subdivisions)
        {
            if (weights.empty() || weights.size() % 2 == 0)
                throw InvalidConfig("fractional convolution needs an odd, nonempty weight array");
            if (subdivisions < 1)
                throw InvalidConfig("fractional convolution needs at least one subdivision");

            plan_ = std::make_unique<FftPlan>(next_fast_len(static_cast<std::size_t>(4 * half_ + 2), pad));
            weights_hat_.assign(plan_->size(), cplx{});
            for (int k = -half_; k <= half_; ++k)
                weights_hat_[wrap(k)] = weights[static_cast<std::size_t>(k + half_)];
            plan_->forward(weights_hat_);
        }

        int half_width() const noexcept { return half_; }
        int subdivisions() const noexcept { return subdivisions_; }
        std::size_t transform_length() const noexcept { return plan_->size(); }
        std::size_t output_size() const noexcept
        {
            return static_cast<std::size_t>(2 * half_ * subdivisions_ + 1);
        }

        /// out[n + K P] = sum_k w_k kernel(n/P - k) for n in [-K P, K P].
        /// `kernel` is called with arguments m + r/P.
        template <class Kernel>
        std::vector<cplx> apply(Kernel&& kernel) const
        {
            const std::size_t L = plan_->size();
            const int K = half_;
            const int P = subdivisions_;
            const int last = K * P;
            std::vector<cplx> out(output_size());
            std::vector<cplx> buf(L);

            for (int r = 0; r < P; ++r)
            {
                const double frac = static_cast<double>(r) / P;
                std::fill(buf.begin(), buf.end(), cplx{});
                for (int m = -2 * K; m <= 2 * K; ++m)
                    buf[wrap(m)] = kernel(static_cast<double>(m) + frac);
                plan_->forward(buf);
                for (std::size_t i = 0; i < L; ++i)
                    buf[i] *= weights_hat_[i];
                plan_->backward(buf);

                const double scale = 1.0 / static_cast<double>(L);
                for (int p = -K; p <= K; ++p)
                {
                    const int n = p * P + r;
                    if (n > last)
                        break;
                    out[static_cast<std::size_t>(n + last)] = buf[wrap(p)] * scale;
                }
            }
            return out;
        }

    private:
        std::size_t wrap(int idx) const noexcept
        {
            const auto L = static_cast<long>(plan_->size());
            long v = idx % L;
            if (v < 0)
                v += L;
            return static_cast<std::size_t>(v);
        }

        int half_;
        int subdivisions_;
        std::unique_ptr<FftPlan> plan_;
        std::vector<cplx> weights_hat_;
    };

    /// One-shot form of FractionalConvolver::apply.
    template <class Kernel>
    std::vector<cplx> fft_fractional_convolve(std::span<const cplx> weights, Kernel&& kernel, int subdivisions,
                                              FftPad pad = FftPad::NextFast)
    {
        return FractionalConvolver(weights, subdivisions, pad).apply(std::forward<Kernel>(kernel));
    }
}  // namespace phaseless
