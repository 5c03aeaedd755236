#ifndef HAMNF_SAMPLING_HPP
#define HAMNF_SAMPLING_HPP

#include <cstdint>
#include <random>

#include "hamnf/poisson.hpp"
#include "hamnf/series.hpp"

namespace hamnf {

/// Deterministic generator of random ring elements for property trials.
/// Coefficients stay small so exact arithmetic stays cheap.
class Sampler {
public:
    Sampler(CtxPtr ctx, uint64_t seed) : ctx_(std::move(ctx)), rng_(seed) {}

    const CtxPtr& context() const { return ctx_; }

    long integer(long lo, long hi);
    ExactScalar scalar(bool allow_radical = true);
    ExactScalar scalar_nonzero(bool allow_radical = true);

    /// Random element of SD_alpha with denominators drawn from a fixed pool
    /// of low-height forms.
    SDElement sd_element(int max_den_factors = 2);

    Monomial monomial(int min_w, int max_w, bool allow_tau = true, bool qp_only = false);

    /// Random truncated series; coefficients via sd_element when
    /// omega_coeffs, otherwise plain scalars.
    Series series(int min_w, int max_w, int terms = 4, bool allow_tau = true,
                  bool omega_coeffs = false);
    /// Random series free of q and p (element of R0).
    Series series_R0(int min_w, int max_w, int terms = 3, bool omega_coeffs = true);
    /// Random element of the ideal I^2 (combinations g * f_i * f_j).
    Series series_I2(int max_w, int terms = 2, bool omega_coeffs = false);

    /// Perturbed oscillator sum alpha_i p_i q_i + random terms of weight in
    /// [3, max_pert_w], q/p only, scalar coefficients.
    Series perturbed_oscillator(int max_pert_w, int terms = 4);

    Derivation derivation(int min_order = 1);

    /// The generator f_i = p_i q_i - tau_i.
    Series moser_generator(int i);

private:
    CtxPtr ctx_;
    std::mt19937_64 rng_;
};

}  // namespace hamnf

#endif
