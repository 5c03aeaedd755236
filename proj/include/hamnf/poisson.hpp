#ifndef HAMNF_POISSON_HPP
#define HAMNF_POISSON_HPP

#include <vector>

#include "hamnf/series.hpp"

namespace hamnf {

/// {f, g} = sum_i dq_i f dp_i g - dp_i f dq_i g, truncated.
Series bracket(const Series& f, const Series& g);

/// Poisson derivation in decomposed form: the Hamiltonian part {-, ham} plus
/// a centre part sum a_i d/dw_i + b_i d/dt_i with a_i, b_i in R0.  Every such
/// combination preserves the bracket, so the type is closed under the
/// operations the iteration needs.
class Derivation {
public:
    static Derivation zero(CtxPtr ctx);
    static Derivation hamiltonian(Series h);
    Derivation(Series ham, std::vector<Series> d_omega, std::vector<Series> d_tau);

    const CtxPtr& context() const { return ctx_; }
    const Series& ham() const { return ham_; }
    const std::vector<Series>& d_omega() const { return d_omega_; }
    const std::vector<Series>& d_tau() const { return d_tau_; }

    /// Validated lower bound on the weighted-degree shift (kDegInf when zero).
    int order() const { return order_; }
    bool is_zero() const;

    Series apply(const Series& f) const;

    Derivation operator-() const;
    Derivation& operator+=(const Derivation& o);
    Derivation& operator-=(const Derivation& o);
    friend Derivation operator+(Derivation x, const Derivation& y) { return x += y; }
    friend Derivation operator-(Derivation x, const Derivation& y) { return x -= y; }

    std::string str() const;

private:
    CtxPtr ctx_;
    Series ham_;
    std::vector<Series> d_omega_, d_tau_;
    int order_ = kDegInf;

    void recompute_order();
};

inline Series apply(const Derivation& v, const Series& f) { return v.apply(f); }

/// e^{-v} f = sum_k (-1)^k v^k(f) / k!, finite below the truncation order.
/// Throws NonPositiveOrder unless order(v) >= 1.
Series exp_apply(const Derivation& v, const Series& f);

/// Samples pairs (f, g) and checks e^{-v}{f,g} = {e^{-v}f, e^{-v}g} modulo
/// truncation; true iff every trial matches exactly.
bool is_poisson_automorphism_sample(const Derivation& v, int trials, uint64_t seed = 12345);

}  // namespace hamnf

#endif
