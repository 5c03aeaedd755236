#include "hamnf/poisson.hpp"

#include <sstream>

#include "hamnf/sampling.hpp"

namespace hamnf {

namespace {

int sat_add(int a, int b) {
    if (a >= kDegInf || b >= kDegInf) return kDegInf;
    return a + b;
}

int sat_sub2(int a) { return a >= kDegInf ? kDegInf : a - 2; }

}  // namespace

Series bracket(const Series& f, const Series& g) {
    require_same_context(f.context(), g.context());
    const CtxPtr& ctx = f.context();
    const int d = ctx->dim();

    // Only q/p-carrying terms contribute, so the unknown parts of one factor
    // meet the other's q/p-low; that bounds what the result can be trusted to.
    DegreeProfile pf = f.profile(), pg = g.profile();
    int t = std::min({ctx->trunc_order(),
                      sat_sub2(sat_add(f.trunc(), std::min(pg.low_qp, g.trunc()))),
                      sat_sub2(sat_add(g.trunc(), std::min(pf.low_qp, f.trunc()))),
                      sat_sub2(sat_add(f.trunc(), g.trunc()))});

    Series out = Series::zero(ctx).with_trunc(t);
    for (const auto& [m1, c1] : f.terms()) {
        if (!m1.has_qp()) continue;
        for (const auto& [m2, c2] : g.terms()) {
            if (!m2.has_qp()) continue;
            int w = m1.weight() + m2.weight() - 2;
            if (w >= t) continue;
            for (int i = 0; i < d; ++i) {
                // {p^a1 q^b1, p^a2 q^b2} picks up b1_i a2_i - a1_i b2_i on
                // the monomial with one q_i and one p_i removed.
                long k = static_cast<long>(m1.b[i]) * m2.a[i] -
                         static_cast<long>(m1.a[i]) * m2.b[i];
                if (k == 0) continue;
                Monomial m = m1 * m2;
                --m.a[i];
                --m.b[i];
                out.add_term(m, (c1 * c2).scaled(ExactScalar(k)));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Derivation

Derivation Derivation::zero(CtxPtr ctx) {
    Series z = Series::zero(ctx);
    return Derivation(z, std::vector<Series>(ctx->dim(), z), std::vector<Series>(ctx->dim(), z));
}

Derivation Derivation::hamiltonian(Series h) {
    CtxPtr ctx = h.context();
    Series z = Series::zero(ctx);
    return Derivation(std::move(h), std::vector<Series>(ctx->dim(), z),
                      std::vector<Series>(ctx->dim(), z));
}

Derivation::Derivation(Series ham, std::vector<Series> d_omega, std::vector<Series> d_tau)
    : ctx_(ham.context()), ham_(std::move(ham)), d_omega_(std::move(d_omega)),
      d_tau_(std::move(d_tau)) {
    if (static_cast<int>(d_omega_.size()) != ctx_->dim() ||
        static_cast<int>(d_tau_.size()) != ctx_->dim())
        throw DimensionMismatch("derivation component count must equal d");
    for (const auto& s : d_omega_) {
        require_same_context(ctx_, s.context());
        if (s.has_qp()) throw DomainError("d_omega coefficients must lie in R0");
    }
    for (const auto& s : d_tau_) {
        require_same_context(ctx_, s.context());
        if (s.has_qp()) throw DomainError("d_tau coefficients must lie in R0");
    }
    recompute_order();
}

void Derivation::recompute_order() {
    auto effective_low = [this](const Series& s) {
        int low = s.low_degree();
        if (s.trunc() < ctx_->trunc_order()) low = std::min(low, s.trunc());
        return low;
    };
    order_ = kDegInf;
    order_ = std::min(order_, sat_sub2(effective_low(ham_)));
    for (const auto& s : d_omega_) order_ = std::min(order_, effective_low(s));
    for (const auto& s : d_tau_) order_ = std::min(order_, sat_sub2(effective_low(s)));
}

bool Derivation::is_zero() const {
    if (!ham_.is_zero()) return false;
    for (const auto& s : d_omega_)
        if (!s.is_zero()) return false;
    for (const auto& s : d_tau_)
        if (!s.is_zero()) return false;
    return true;
}

Series Derivation::apply(const Series& f) const {
    require_same_context(ctx_, f.context());
    Series out = bracket(f, ham_);
    for (int i = 0; i < ctx_->dim(); ++i) {
        if (!d_omega_[i].is_zero()) out += d_omega_[i] * f.deriv_omega(i);
        if (!d_tau_[i].is_zero()) out += d_tau_[i] * f.deriv_tau(i);
    }
    // validated degree shift
    int lf = std::min(f.low_degree(), f.trunc());
    if (!out.is_zero() && out.low_degree() < std::min(sat_add(lf, order_), kDegInf))
        throw std::logic_error("derivation violated its validated order");
    return out;
}

Derivation Derivation::operator-() const {
    Derivation out = *this;
    out.ham_ = -out.ham_;
    for (auto& s : out.d_omega_) s = -s;
    for (auto& s : out.d_tau_) s = -s;
    return out;
}

Derivation& Derivation::operator+=(const Derivation& o) {
    require_same_context(ctx_, o.ctx_);
    ham_ += o.ham_;
    for (int i = 0; i < ctx_->dim(); ++i) {
        d_omega_[i] += o.d_omega_[i];
        d_tau_[i] += o.d_tau_[i];
    }
    recompute_order();
    return *this;
}

Derivation& Derivation::operator-=(const Derivation& o) { return *this += -o; }

std::string Derivation::str() const {
    std::ostringstream out;
    out << "Ham(" << ham_.str() << ")";
    for (int i = 0; i < ctx_->dim(); ++i)
        if (!d_omega_[i].is_zero()) out << " + (" << d_omega_[i].str() << ")*dw" << (i + 1);
    for (int i = 0; i < ctx_->dim(); ++i)
        if (!d_tau_[i].is_zero()) out << " + (" << d_tau_[i].str() << ")*dt" << (i + 1);
    return out.str();
}

// ---------------------------------------------------------------------------

Series exp_apply(const Derivation& v, const Series& f) {
    if (v.order() < 1) throw NonPositiveOrder("exponential requires a derivation of order >= 1");
    const CtxPtr& ctx = f.context();
    Series acc = f;
    Series power = f;
    mpq_class kfact(1);
    int sign = 1;
    const int cap = 4 * ctx->trunc_order() + 8;
    for (int k = 1;; ++k) {
        if (k > cap) throw std::logic_error("runaway exponential; order bookkeeping broken");
        power = v.apply(power);
        kfact *= k;
        sign = -sign;
        if (power.is_zero() && power.trunc() >= acc.trunc()) break;
        acc += power.scaled(ExactScalar(mpq_class(sign) / kfact));
        if (power.is_zero() && power.trunc() >= acc.trunc()) break;
    }
    return acc;
}

bool is_poisson_automorphism_sample(const Derivation& v, int trials, uint64_t seed) {
    if (v.order() < 1) throw NonPositiveOrder("sampling requires a derivation of order >= 1");
    Sampler sampler(v.context(), seed);
    for (int t = 0; t < trials; ++t) {
        Series f = sampler.series(2, 4);
        Series g = sampler.series(2, 4);
        Series lhs = exp_apply(v, bracket(f, g));
        Series rhs = bracket(exp_apply(v, f), exp_apply(v, g));
        if (!lhs.equals_mod_trunc(rhs)) return false;
    }
    return true;
}

}  // namespace hamnf
