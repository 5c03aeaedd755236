#ifndef HAMNF_SERIES_HPP
#define HAMNF_SERIES_HPP

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "hamnf/scalars.hpp"

namespace hamnf {

/// Sentinel degree for "no terms" / "known to all available orders".
inline constexpr int kDegInf = std::numeric_limits<int>::max() / 4;

/// Monomial p^a q^b t^e; q, p carry weight 1, tau weight 2 (omega weight 0
/// lives in the coefficients).
struct Monomial {
    std::vector<uint16_t> a, b, e;

    explicit Monomial(int d) : a(d, 0), b(d, 0), e(d, 0) {}
    Monomial(std::vector<uint16_t> pa, std::vector<uint16_t> qb, std::vector<uint16_t> te)
        : a(std::move(pa)), b(std::move(qb)), e(std::move(te)) {}

    int dim() const { return static_cast<int>(a.size()); }
    bool is_unit() const;
    bool has_qp() const;
    bool has_tau() const;

    /// |a| + |b| + 2|e|
    int weight() const;

    Monomial operator*(const Monomial& o) const;

    bool operator==(const Monomial& o) const = default;
    /// graded lexicographic (weight first, then a, b, e lexicographically)
    bool operator<(const Monomial& o) const;

    std::string str() const;
};

int weighted_degree(const Monomial& m);

/// Degree profile used for truncation propagation; lows are over stored terms
/// (kDegInf when absent).
struct DegreeProfile {
    int low = kDegInf;        // any term
    int low_qp = kDegInf;     // terms with q/p content
    int low_tau = kDegInf;    // terms with tau content
    int low_omega = kDegInf;  // terms whose coefficient depends on omega
};

/// Truncated weighted-graded series in q, p, tau with SDElement coefficients:
/// an element of SD_alpha[[tau, q, p]] known modulo weighted degree >= trunc.
class Series {
public:
    Series() = default;
    static Series zero(CtxPtr ctx);
    static Series scalar(CtxPtr ctx, const ExactScalar& c);
    static Series one(CtxPtr ctx) { return scalar(std::move(ctx), ExactScalar(1)); }
    static Series coeff(CtxPtr ctx, const SDElement& c);
    /// The coefficient variable omega_i as a weight-0 series.
    static Series omega(CtxPtr ctx, int i);
    static Series p(CtxPtr ctx, int i);
    static Series q(CtxPtr ctx, int i);
    static Series tau(CtxPtr ctx, int i);
    static Series monomial(CtxPtr ctx, const Monomial& m, SDElement c);

    const CtxPtr& context() const { return ctx_; }
    int trunc() const { return trunc_; }
    const std::map<Monomial, SDElement>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    Series with_trunc(int t) const;

    /// Lowest stored weighted degree, kDegInf when no terms are stored.
    int low_degree() const;
    /// Highest stored weighted degree, -1 when empty.
    int high_degree() const;
    DegreeProfile profile() const;

    SDElement coefficient(const Monomial& m) const;
    void add_term(const Monomial& m, const SDElement& c);

    Series operator-() const;
    Series& operator+=(const Series& o);
    Series& operator-=(const Series& o);
    friend Series operator+(Series x, const Series& y) { return x += y; }
    friend Series operator-(Series x, const Series& y) { return x -= y; }
    Series operator*(const Series& o) const;
    Series scaled(const SDElement& c) const;
    Series scaled(const ExactScalar& c) const;

    /// [h]_i^j: the window of terms with i <= weight < j (j = kDegInf allowed).
    Series window(int i, int j = kDegInf) const;

    Series deriv_q(int i) const;
    Series deriv_p(int i) const;
    Series deriv_tau(int i) const;
    /// Coefficient-wise rational derivative in omega_i (weights unchanged).
    Series deriv_omega(int i) const;

    /// tau_i -> q_i p_i; requires omega-free coefficients.
    Series substitute_tau_by_pq() const;

    bool has_qp() const;
    bool has_tau() const;
    bool has_omega() const;
    bool in_R0() const { return !has_qp(); }
    bool in_P() const { return !has_tau() && !has_omega(); }
    bool in_Q() const { return !has_omega(); }

    /// Structural equality (same terms, same truncation).
    bool operator==(const Series& o) const { return terms_ == o.terms_ && trunc_ == o.trunc_; }
    /// Equality of all terms below min(trunc, o.trunc).
    bool equals_mod_trunc(const Series& o) const;

    std::string str() const;

private:
    CtxPtr ctx_;
    std::map<Monomial, SDElement> terms_;
    int trunc_ = 0;

    void prune();
};

Series window(const Series& h, int i, int j = kDegInf);
Series mul(const Series& x, const Series& y);
Series substitute_tau_by_pq(const Series& x);

}  // namespace hamnf

#endif
