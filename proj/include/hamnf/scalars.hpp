#ifndef HAMNF_SCALARS_HPP
#define HAMNF_SCALARS_HPP

#include <gmpxx.h>

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hamnf/errors.hpp"

namespace hamnf {

/// Element of the coefficient field K = Q or K = Q(sqrt(m)) for a fixed
/// square-free positive non-square m.  Stored as rat + rad*sqrt(m) with
/// exact rationals; rad == 0 forces m == 0 so the representation is unique.
class ExactScalar {
public:
    ExactScalar() : m_(0) {}
    ExactScalar(long n) : rat_(n), m_(0) {}  // NOLINT: implicit by design
    ExactScalar(const mpq_class& r) : rat_(r), m_(0) { rat_.canonicalize(); }
    ExactScalar(mpq_class rat, mpq_class rad, long m);

    static ExactScalar sqrt_of(long m) { return ExactScalar(0, 1, m); }

    const mpq_class& rational_part() const { return rat_; }
    const mpq_class& radical_part() const { return rad_; }
    long radicand() const { return m_; }

    bool is_zero() const { return rat_ == 0 && rad_ == 0; }
    bool is_rational() const { return rad_ == 0; }
    bool is_one() const { return rad_ == 0 && rat_ == 1; }

    /// Exact sign in the real embedding (sqrt(m) > 0).
    int sign() const;

    ExactScalar operator-() const { return ExactScalar(-rat_, -rad_, m_); }
    ExactScalar& operator+=(const ExactScalar& o);
    ExactScalar& operator-=(const ExactScalar& o);
    ExactScalar& operator*=(const ExactScalar& o);
    /// Exact division; throws DomainError on zero divisor.
    ExactScalar& operator/=(const ExactScalar& o);

    friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
    friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
    friend ExactScalar operator*(ExactScalar a, const ExactScalar& b) { return a *= b; }
    friend ExactScalar operator/(ExactScalar a, const ExactScalar& b) { return a /= b; }

    ExactScalar inverse() const;

    bool operator==(const ExactScalar& o) const {
        return rat_ == o.rat_ && rad_ == o.rad_ && m_ == o.m_;
    }
    bool operator!=(const ExactScalar& o) const { return !(*this == o); }

    double to_double() const;

    /// Renders as "a", "a/b", "sqrt(m)", "a+c*sqrt(m)", "a-c/d*sqrt(m)".
    std::string str() const;
    /// Parses the str() grammar.  field_m fixes the expected radicand; a bare
    /// sqrt(k) with k != field_m is rejected unless field_m == 0.
    static ExactScalar parse(const std::string& text, long field_m = 0);

private:
    mpq_class rat_;
    mpq_class rad_;
    long m_;

    void merge_field(const ExactScalar& o);
};

/// Frequency vector alpha with the bound through which exact non-resonance
/// has been certified.
struct FrequencyVector {
    std::vector<ExactScalar> alpha;
    int certified_bound = 0;

    int dim() const { return static_cast<int>(alpha.size()); }
    bool operator==(const FrequencyVector& o) const { return alpha == o.alpha; }
};

/// (alpha, J) = sum alpha_i J_i, exact.
ExactScalar pair_scalar(const FrequencyVector& alpha, const std::vector<long>& J);

/// Exhaustively checks (alpha, J) != 0 for all 0 < |J|_1 <= bound.
/// Returns std::nullopt on success, or a violating J.
std::optional<std::vector<long>> check_nonresonant(const FrequencyVector& alpha, int bound);

/// Primitive integer covector J (gcd 1, first nonzero entry positive);
/// stands for the linear form (alpha + omega, J).
class LinearForm {
public:
    explicit LinearForm(std::vector<long> j);

    const std::vector<long>& coeffs() const { return j_; }
    int dim() const { return static_cast<int>(j_.size()); }

    /// Factors an arbitrary nonzero integer vector as scale * primitive form.
    /// The scale is a (possibly negative) nonzero integer.
    static std::pair<long, LinearForm> split(const std::vector<long>& raw);

    std::strong_ordering operator<=>(const LinearForm& o) const = default;

private:
    std::vector<long> j_;
};

class RingContext;
using CtxPtr = std::shared_ptr<const RingContext>;

/// Shared immutable context: dimension, frequency vector, truncation order,
/// and the field radicand.  Construction certifies non-resonance through the
/// truncation order, so every divisor the engine forms is provably nonzero.
class RingContext {
public:
    static CtxPtr make(std::vector<ExactScalar> alpha, int trunc_order, long field_m = 0);

    int dim() const { return d_; }
    const FrequencyVector& alpha() const { return alpha_; }
    int trunc_order() const { return n_; }
    long field_m() const { return field_m_; }

    /// Constant term (alpha, J) of the form with integer covector J.
    ExactScalar form_constant(const std::vector<long>& J) const;

    bool compatible(const RingContext& o) const {
        return d_ == o.d_ && n_ == o.n_ && alpha_ == o.alpha_ && field_m_ == o.field_m_;
    }

private:
    RingContext(std::vector<ExactScalar> alpha, int trunc_order, long field_m);
    int d_;
    FrequencyVector alpha_;
    int n_;
    long field_m_;
};

void require_same_context(const CtxPtr& a, const CtxPtr& b);

/// Sparse polynomial in omega_1..omega_d over ExactScalar.
class OmegaPoly {
public:
    using ExpVec = std::vector<unsigned>;

    OmegaPoly() : d_(0) {}
    explicit OmegaPoly(int d) : d_(d) {}
    static OmegaPoly constant(int d, ExactScalar c);
    static OmegaPoly variable(int d, int i);

    int dim() const { return d_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    ExactScalar constant_term() const;
    int total_degree() const;
    const std::map<ExpVec, ExactScalar>& terms() const { return terms_; }

    void add_term(const ExpVec& e, const ExactScalar& c);

    OmegaPoly operator-() const;
    OmegaPoly& operator+=(const OmegaPoly& o);
    OmegaPoly& operator-=(const OmegaPoly& o);
    OmegaPoly operator*(const OmegaPoly& o) const;
    friend OmegaPoly operator+(OmegaPoly a, const OmegaPoly& b) { return a += b; }
    friend OmegaPoly operator-(OmegaPoly a, const OmegaPoly& b) { return a -= b; }
    OmegaPoly scaled(const ExactScalar& c) const;

    bool operator==(const OmegaPoly& o) const { return d_ == o.d_ && terms_ == o.terms_; }

    /// Multiplies by the linear form c0 + sum J_i omega_i.
    OmegaPoly times_form(const ExactScalar& c0, const std::vector<long>& J) const;
    /// Exact division by the linear form; nullopt when not divisible.
    std::optional<OmegaPoly> divided_by_form(const ExactScalar& c0,
                                             const std::vector<long>& J) const;

    OmegaPoly deriv(int i) const;
    double eval(const std::vector<double>& omega) const;
    ExactScalar eval_exact(const std::vector<ExactScalar>& omega) const;

    std::string str(int d) const;

private:
    int d_;
    std::map<ExpVec, ExactScalar> terms_;
};

/// Element of the small denominator ring: a rational function in omega whose
/// denominator is a multiset of resonance forms (alpha + omega, J), kept
/// factored.  Canonical form: no denominator factor divides the numerator,
/// zero carries an empty denominator.
class SDElement {
public:
    SDElement() = default;
    static SDElement zero(CtxPtr ctx);
    static SDElement one(CtxPtr ctx) { return scalar(std::move(ctx), ExactScalar(1)); }
    static SDElement scalar(CtxPtr ctx, const ExactScalar& c);
    static SDElement omega(CtxPtr ctx, int i);
    static SDElement from_poly(CtxPtr ctx, OmegaPoly num);

    const CtxPtr& context() const { return ctx_; }
    const OmegaPoly& numerator() const { return num_; }
    const std::map<LinearForm, unsigned>& denominator() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return den_.empty() && num_.is_constant() && num_.constant_term().is_one(); }
    /// True when the value is free of omega (constant numerator, no poles).
    bool is_omega_free() const { return den_.empty() && num_.is_constant(); }
    ExactScalar constant_value() const;

    SDElement operator-() const;
    SDElement& operator+=(const SDElement& o);
    SDElement& operator-=(const SDElement& o);
    SDElement& operator*=(const SDElement& o);
    friend SDElement operator+(SDElement a, const SDElement& b) { return a += b; }
    friend SDElement operator-(SDElement a, const SDElement& b) { return a -= b; }
    friend SDElement operator*(SDElement a, const SDElement& b) { return a *= b; }

    SDElement scaled(const ExactScalar& c) const;
    /// Division by the form with raw integer covector (need not be primitive);
    /// throws ResonantDivisor when the covector is zero.
    SDElement divided_by_form(const std::vector<long>& raw_J) const;

    SDElement deriv_omega(int i) const;

    bool operator==(const SDElement& o) const;
    bool operator!=(const SDElement& o) const { return !(*this == o); }

    /// IEEE-double evaluation; throws PoleProximity when any denominator
    /// factor is below 1e-12 in absolute value.
    double eval(const std::vector<double>& omega) const;
    /// Exact evaluation at rational-in-K points; throws PoleProximity on an
    /// exact pole.
    ExactScalar eval_exact(const std::vector<ExactScalar>& omega) const;

    /// "num" or "num/(c + J.w)^k*...", factors ordered lexicographically on J.
    std::string str() const;
    static SDElement parse(CtxPtr ctx, const std::string& text);

private:
    CtxPtr ctx_;
    OmegaPoly num_;
    std::map<LinearForm, unsigned> den_;

    void normalize();
    ExactScalar form_constant(const LinearForm& f) const;
    std::string f_str(const LinearForm& f) const;
};

}  // namespace hamnf

#endif
