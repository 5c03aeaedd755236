#include "hamnf/series.hpp"

#include <algorithm>
#include <sstream>

namespace hamnf {

// ---------------------------------------------------------------------------
// Monomial

bool Monomial::is_unit() const {
    auto all0 = [](const std::vector<uint16_t>& v) {
        return std::all_of(v.begin(), v.end(), [](uint16_t x) { return x == 0; });
    };
    return all0(a) && all0(b) && all0(e);
}

bool Monomial::has_qp() const {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] || b[i]) return true;
    return false;
}

bool Monomial::has_tau() const {
    for (uint16_t v : e)
        if (v) return true;
    return false;
}

int Monomial::weight() const {
    int w = 0;
    for (uint16_t v : a) w += v;
    for (uint16_t v : b) w += v;
    for (uint16_t v : e) w += 2 * v;
    return w;
}

int weighted_degree(const Monomial& m) { return m.weight(); }

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial out(dim());
    for (int i = 0; i < dim(); ++i) {
        out.a[i] = a[i] + o.a[i];
        out.b[i] = b[i] + o.b[i];
        out.e[i] = e[i] + o.e[i];
    }
    return out;
}

bool Monomial::operator<(const Monomial& o) const {
    int w = weight(), ow = o.weight();
    if (w != ow) return w < ow;
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return e < o.e;
}

std::string Monomial::str() const {
    if (is_unit()) return "1";
    std::ostringstream out;
    bool first = true;
    auto emit = [&](char base, int i, uint16_t k) {
        if (k == 0) return;
        if (!first) out << "*";
        first = false;
        out << base;
        if (dim() > 1) out << (i + 1);
        if (k > 1) out << "^" << k;
    };
    for (int i = 0; i < dim(); ++i) emit('p', i, a[i]);
    for (int i = 0; i < dim(); ++i) emit('q', i, b[i]);
    for (int i = 0; i < dim(); ++i) emit('t', i, e[i]);
    return out.str();
}

// ---------------------------------------------------------------------------
// Series

Series Series::zero(CtxPtr ctx) {
    Series s;
    s.trunc_ = ctx->trunc_order();
    s.ctx_ = std::move(ctx);
    return s;
}

Series Series::scalar(CtxPtr ctx, const ExactScalar& c) {
    return coeff(ctx, SDElement::scalar(ctx, c));
}

Series Series::coeff(CtxPtr ctx, const SDElement& c) {
    Series s = zero(ctx);
    if (!c.is_zero()) s.terms_.emplace(Monomial(ctx->dim()), c);
    return s;
}

Series Series::omega(CtxPtr ctx, int i) { return coeff(ctx, SDElement::omega(ctx, i)); }

Series Series::monomial(CtxPtr ctx, const Monomial& m, SDElement c) {
    Series s = zero(ctx);
    if (!c.is_zero() && m.weight() < s.trunc_) s.terms_.emplace(m, std::move(c));
    return s;
}

Series Series::p(CtxPtr ctx, int i) {
    Monomial m(ctx->dim());
    m.a[i] = 1;
    return monomial(ctx, m, SDElement::one(ctx));
}

Series Series::q(CtxPtr ctx, int i) {
    Monomial m(ctx->dim());
    m.b[i] = 1;
    return monomial(ctx, m, SDElement::one(ctx));
}

Series Series::tau(CtxPtr ctx, int i) {
    Monomial m(ctx->dim());
    m.e[i] = 1;
    return monomial(ctx, m, SDElement::one(ctx));
}

Series Series::with_trunc(int t) const {
    Series out = *this;
    out.trunc_ = std::min(t, ctx_->trunc_order());
    out.prune();
    return out;
}

void Series::prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second.is_zero() || it->first.weight() >= trunc_)
            it = terms_.erase(it);
        else
            ++it;
    }
}

int Series::low_degree() const {
    return terms_.empty() ? kDegInf : terms_.begin()->first.weight();
}

int Series::high_degree() const {
    return terms_.empty() ? -1 : terms_.rbegin()->first.weight();
}

DegreeProfile Series::profile() const {
    DegreeProfile pr;
    for (const auto& [m, c] : terms_) {
        int w = m.weight();
        pr.low = std::min(pr.low, w);
        if (m.has_qp()) pr.low_qp = std::min(pr.low_qp, w);
        if (m.has_tau()) pr.low_tau = std::min(pr.low_tau, w);
        if (!c.is_omega_free()) pr.low_omega = std::min(pr.low_omega, w);
    }
    return pr;
}

SDElement Series::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? SDElement::zero(ctx_) : it->second;
}

void Series::add_term(const Monomial& m, const SDElement& c) {
    if (c.is_zero() || m.weight() >= trunc_) return;
    auto [it, fresh] = terms_.try_emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Series Series::operator-() const {
    Series out = *this;
    for (auto& [m, c] : out.terms_) c = -c;
    return out;
}

Series& Series::operator+=(const Series& o) {
    require_same_context(ctx_, o.ctx_);
    trunc_ = std::min(trunc_, o.trunc_);
    prune();
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Series& Series::operator-=(const Series& o) {
    require_same_context(ctx_, o.ctx_);
    trunc_ = std::min(trunc_, o.trunc_);
    prune();
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

namespace {

int sat_add(int a, int b) {
    if (a >= kDegInf || b >= kDegInf) return kDegInf;
    return a + b;
}

}  // namespace

Series Series::operator*(const Series& o) const {
    require_same_context(ctx_, o.ctx_);
    Series out = Series::zero(ctx_);
    // Unknown terms of one factor meet stored terms of the other at degree
    // >= trunc + low; the result is only trusted below that.
    int lx = std::min(low_degree(), trunc_);
    int ly = std::min(o.low_degree(), o.trunc_);
    out.trunc_ = std::min({ctx_->trunc_order(), sat_add(trunc_, ly), sat_add(o.trunc_, lx)});
    for (const auto& [m1, c1] : terms_) {
        int w1 = m1.weight();
        for (const auto& [m2, c2] : o.terms_) {
            if (w1 + m2.weight() >= out.trunc_) continue;
            out.add_term(m1 * m2, c1 * c2);
        }
    }
    return out;
}

Series Series::scaled(const SDElement& c) const {
    Series out = Series::zero(ctx_);
    out.trunc_ = trunc_;
    if (c.is_zero()) return out;
    for (const auto& [m, v] : terms_) out.add_term(m, v * c);
    return out;
}

Series Series::scaled(const ExactScalar& c) const { return scaled(SDElement::scalar(ctx_, c)); }

Series Series::window(int i, int j) const {
    if (i > j) throw DomainError("window bounds out of order");
    Series out = Series::zero(ctx_);
    // A window closed strictly below the trusted order is exact.
    out.trunc_ = (j <= trunc_) ? ctx_->trunc_order() : trunc_;
    for (const auto& [m, c] : terms_) {
        int w = m.weight();
        if (w >= i && w < j) out.add_term(m, c);
    }
    return out;
}

Series window(const Series& h, int i, int j) { return h.window(i, j); }
Series mul(const Series& x, const Series& y) { return x * y; }
Series substitute_tau_by_pq(const Series& x) { return x.substitute_tau_by_pq(); }

Series Series::deriv_q(int i) const {
    Series out = Series::zero(ctx_);
    out.trunc_ = std::max(trunc_ - 1, 0);
    for (const auto& [m, c] : terms_) {
        if (m.b[i] == 0) continue;
        Monomial low = m;
        --low.b[i];
        out.add_term(low, c.scaled(ExactScalar(static_cast<long>(m.b[i]))));
    }
    return out;
}

Series Series::deriv_p(int i) const {
    Series out = Series::zero(ctx_);
    out.trunc_ = std::max(trunc_ - 1, 0);
    for (const auto& [m, c] : terms_) {
        if (m.a[i] == 0) continue;
        Monomial low = m;
        --low.a[i];
        out.add_term(low, c.scaled(ExactScalar(static_cast<long>(m.a[i]))));
    }
    return out;
}

Series Series::deriv_tau(int i) const {
    Series out = Series::zero(ctx_);
    out.trunc_ = std::max(trunc_ - 2, 0);
    for (const auto& [m, c] : terms_) {
        if (m.e[i] == 0) continue;
        Monomial low = m;
        --low.e[i];
        out.add_term(low, c.scaled(ExactScalar(static_cast<long>(m.e[i]))));
    }
    return out;
}

Series Series::deriv_omega(int i) const {
    Series out = Series::zero(ctx_);
    out.trunc_ = trunc_;
    for (const auto& [m, c] : terms_) out.add_term(m, c.deriv_omega(i));
    return out;
}

Series Series::substitute_tau_by_pq() const {
    if (has_omega())
        throw DomainError("tau -> qp substitution requires omega-free coefficients");
    Series out = Series::zero(ctx_);
    out.trunc_ = trunc_;
    for (const auto& [m, c] : terms_) {
        Monomial subst = m;
        for (int i = 0; i < m.dim(); ++i) {
            subst.a[i] += m.e[i];
            subst.b[i] += m.e[i];
            subst.e[i] = 0;
        }
        out.add_term(subst, c);
    }
    return out;
}

bool Series::has_qp() const {
    for (const auto& [m, c] : terms_)
        if (m.has_qp()) return true;
    return false;
}

bool Series::has_tau() const {
    for (const auto& [m, c] : terms_)
        if (m.has_tau()) return true;
    return false;
}

bool Series::has_omega() const {
    for (const auto& [m, c] : terms_)
        if (!c.is_omega_free()) return true;
    return false;
}

bool Series::equals_mod_trunc(const Series& o) const {
    int t = std::min(trunc_, o.trunc_);
    auto below = [&](const Series& s) {
        std::map<Monomial, SDElement> res;
        for (const auto& [m, c] : s.terms_)
            if (m.weight() < t) res.emplace(m, c);
        return res;
    };
    return below(*this) == below(o);
}

std::string Series::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        std::string cs = c.str();
        bool wrap = cs.find('+') != std::string::npos || cs.find('-', 1) != std::string::npos ||
                    cs.find('/') != std::string::npos;
        std::string piece;
        if (m.is_unit())
            piece = wrap ? "(" + cs + ")" : cs;
        else if (c.is_one())
            piece = m.str();
        else
            piece = (wrap ? "(" + cs + ")" : cs) + "*" + m.str();
        if (first) {
            out << piece;
            first = false;
        } else if (piece[0] == '-') {
            out << " - " << piece.substr(1);
        } else {
            out << " + " << piece;
        }
    }
    return out.str();
}

}  // namespace hamnf
