#include "hamnf/scalars.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace hamnf {

// ---------------------------------------------------------------------------
// ExactScalar

ExactScalar::ExactScalar(mpq_class rat, mpq_class rad, long m)
    : rat_(std::move(rat)), rad_(std::move(rad)), m_(m) {
    rat_.canonicalize();
    rad_.canonicalize();
    if (rad_ == 0) m_ = 0;
    if (rad_ != 0 && m_ <= 1) throw DomainError("radicand must be a square-free integer > 1");
}

void ExactScalar::merge_field(const ExactScalar& o) {
    if (m_ == o.m_) return;
    if (m_ == 0) {
        m_ = o.m_;
        return;
    }
    if (o.m_ != 0) throw DomainError("mixed radicands in scalar arithmetic");
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& o) {
    merge_field(o);
    rat_ += o.rat_;
    rad_ += o.rad_;
    if (rad_ == 0) m_ = 0;
    return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& o) {
    merge_field(o);
    rat_ -= o.rat_;
    rad_ -= o.rad_;
    if (rad_ == 0) m_ = 0;
    return *this;
}

ExactScalar& ExactScalar::operator*=(const ExactScalar& o) {
    merge_field(o);
    // (a + b s)(c + e s) = ac + be m + (ae + bc) s,  s = sqrt(m)
    mpq_class a = rat_, b = rad_;
    rat_ = a * o.rat_ + b * o.rad_ * m_;
    rad_ = a * o.rad_ + b * o.rat_;
    if (rad_ == 0) m_ = 0;
    return *this;
}

ExactScalar ExactScalar::inverse() const {
    if (is_zero()) throw DomainError("division by zero scalar");
    if (rad_ == 0) return ExactScalar(mpq_class(1) / rat_);
    // 1/(a + b s) = (a - b s)/(a^2 - b^2 m); nonzero since sqrt(m) irrational.
    mpq_class norm = rat_ * rat_ - rad_ * rad_ * m_;
    return ExactScalar(rat_ / norm, -rad_ / norm, m_);
}

ExactScalar& ExactScalar::operator/=(const ExactScalar& o) { return *this *= o.inverse(); }

int ExactScalar::sign() const {
    int sr = sgn(rat_);
    int ss = sgn(rad_);
    if (ss == 0) return sr;
    if (sr == 0) return ss;
    if (sr == ss) return sr;
    // Opposite signs: compare |a| against |b| sqrt(m) exactly.
    mpq_class lhs = rat_ * rat_;
    mpq_class rhs = rad_ * rad_ * m_;
    if (lhs == rhs) return 0;  // unreachable for square-free m > 1
    return (lhs > rhs) ? sr : ss;
}

double ExactScalar::to_double() const {
    double v = rat_.get_d();
    if (rad_ != 0) v += rad_.get_d() * std::sqrt(static_cast<double>(m_));
    return v;
}

std::string ExactScalar::str() const {
    auto q_str = [](const mpq_class& q) { return q.get_str(); };
    if (rad_ == 0) return q_str(rat_);
    std::ostringstream out;
    bool lead = true;
    if (rat_ != 0) {
        out << q_str(rat_);
        lead = false;
    }
    mpq_class c = rad_;
    if (!lead) {
        out << (c > 0 ? "+" : "-");
        c = abs(c);
    }
    if (c == 1)
        out << "sqrt(" << m_ << ")";
    else if (c == -1)
        out << "-sqrt(" << m_ << ")";
    else
        out << q_str(c) << "*sqrt(" << m_ << ")";
    return out.str();
}

namespace {

mpq_class parse_rational(const std::string& s) {
    if (s.empty()) throw ParseError("empty rational literal");
    for (char ch : s)
        if (!std::isdigit(static_cast<unsigned char>(ch)) && ch != '/' && ch != '-' && ch != '+')
            throw ParseError("bad rational literal: " + s);
    mpq_class q(s);
    q.canonicalize();
    return q;
}

std::string strip_ws(const std::string& s) {
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    return out;
}

}  // namespace

ExactScalar ExactScalar::parse(const std::string& text, long field_m) {
    std::string s = strip_ws(text);
    if (s.empty()) throw ParseError("empty scalar");
    // Split on top-level + / - (position 0 counts as a sign, not a split).
    std::vector<std::string> parts;
    std::vector<int> signs;
    size_t start = 0;
    int depth = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if ((c == '+' || c == '-') && depth == 0 && i > 0 && s[i - 1] != '(' && s[i - 1] != '*' &&
            s[i - 1] != '/' && s[i - 1] != '+' && s[i - 1] != '-') {
            parts.push_back(s.substr(start, i - start));
            signs.push_back(c == '-' ? -1 : 1);
            start = i + 1;
        }
    }
    parts.push_back(s.substr(start));
    signs.insert(signs.begin(), 1);

    ExactScalar total;
    for (size_t i = 0; i < parts.size(); ++i) {
        std::string p = parts[i];
        int sign = signs[i];
        if (p.empty()) throw ParseError("dangling sign in scalar: " + text);
        if (!p.empty() && p[0] == '-') {
            sign = -sign;
            p = p.substr(1);
        } else if (!p.empty() && p[0] == '+') {
            p = p.substr(1);
        }
        mpq_class coef(1);
        bool radical = false;
        long m = 0;
        auto pos = p.find("sqrt(");
        if (pos != std::string::npos) {
            radical = true;
            auto close = p.find(')', pos);
            if (close == std::string::npos) throw ParseError("unclosed sqrt in: " + text);
            m = std::stol(p.substr(pos + 5, close - pos - 5));
            if (field_m != 0 && m != field_m)
                throw ParseError("radicand mismatch in scalar: " + text);
            std::string pre = p.substr(0, pos);
            if (!pre.empty() && pre.back() == '*') pre.pop_back();
            if (!pre.empty()) coef = parse_rational(pre);
            std::string post = p.substr(close + 1);
            if (!post.empty()) {
                if (post[0] == '/')
                    coef /= parse_rational(post.substr(1));
                else
                    throw ParseError("trailing text after sqrt in: " + text);
            }
        } else {
            coef = parse_rational(p);
        }
        if (sign < 0) coef = -coef;
        if (radical)
            total += ExactScalar(0, coef, m);
        else
            total += ExactScalar(coef);
    }
    return total;
}

// ---------------------------------------------------------------------------
// FrequencyVector helpers

ExactScalar pair_scalar(const FrequencyVector& alpha, const std::vector<long>& J) {
    if (J.size() != alpha.alpha.size()) throw DimensionMismatch("pairing dimension mismatch");
    ExactScalar acc;
    for (size_t i = 0; i < J.size(); ++i) acc += alpha.alpha[i] * ExactScalar(J[i]);
    return acc;
}

namespace {

// Enumerates J with |J|_1 <= bound, first nonzero entry positive.
bool scan_resonances(const FrequencyVector& alpha, int bound, std::vector<long>& J, size_t idx,
                     int budget, bool leading_set, std::vector<long>& witness) {
    if (idx == J.size()) {
        if (!leading_set) return true;  // J == 0
        if (pair_scalar(alpha, J).is_zero()) {
            witness = J;
            return false;
        }
        return true;
    }
    long lo = leading_set ? -budget : 0;  // sign fixed by the first nonzero entry
    for (long v = lo; v <= budget; ++v) {
        J[idx] = v;
        bool lead = leading_set || v != 0;
        if (!scan_resonances(alpha, bound, J, idx + 1, budget - static_cast<int>(std::labs(v)),
                             lead, witness))
            return false;
    }
    J[idx] = 0;
    return true;
}

}  // namespace

std::optional<std::vector<long>> check_nonresonant(const FrequencyVector& alpha, int bound) {
    if (bound < 1) throw DomainError("non-resonance bound must be >= 1");
    std::vector<long> J(alpha.alpha.size(), 0), witness;
    if (!scan_resonances(alpha, bound, J, 0, bound, false, witness)) return witness;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// LinearForm

LinearForm::LinearForm(std::vector<long> j) : j_(std::move(j)) {
    long g = 0;
    long first = 0;
    for (long v : j_) {
        g = std::gcd(g, std::labs(v));
        if (first == 0) first = v;
    }
    if (g != 1 || first <= 0)
        throw DomainError("linear form covector must be primitive with positive leading entry");
}

std::pair<long, LinearForm> LinearForm::split(const std::vector<long>& raw) {
    long g = 0;
    long first = 0;
    for (long v : raw) {
        g = std::gcd(g, std::labs(v));
        if (first == 0) first = v;
    }
    if (g == 0) throw ResonantDivisor("zero covector has no associated form");
    long scale = (first > 0) ? g : -g;
    std::vector<long> j(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) j[i] = raw[i] / scale;
    return {scale, LinearForm(std::move(j))};
}

// ---------------------------------------------------------------------------
// RingContext

RingContext::RingContext(std::vector<ExactScalar> alpha, int trunc_order, long field_m)
    : d_(static_cast<int>(alpha.size())), n_(trunc_order), field_m_(field_m) {
    alpha_.alpha = std::move(alpha);
}

CtxPtr RingContext::make(std::vector<ExactScalar> alpha, int trunc_order, long field_m) {
    if (alpha.empty()) throw DomainError("need at least one degree of freedom");
    if (trunc_order < 3) throw DomainError("truncation order must be >= 3");
    auto ctx = std::shared_ptr<RingContext>(
        new RingContext(std::move(alpha), trunc_order, field_m));
    // Only forms with |J|_1 <= trunc_order ever arise as divisors, so a
    // certificate through the truncation order makes every division sound.
    if (auto bad = check_nonresonant(ctx->alpha_, trunc_order)) throw ResonantFrequency(*bad);
    ctx->alpha_.certified_bound = trunc_order;
    return ctx;
}

ExactScalar RingContext::form_constant(const std::vector<long>& J) const {
    return pair_scalar(alpha_, J);
}

void require_same_context(const CtxPtr& a, const CtxPtr& b) {
    if (!a || !b) throw DomainError("missing ring context");
    if (a.get() == b.get()) return;
    if (!a->compatible(*b)) throw DomainError("ring context mismatch");
}

// ---------------------------------------------------------------------------
// OmegaPoly

OmegaPoly OmegaPoly::constant(int d, ExactScalar c) {
    OmegaPoly p(d);
    if (!c.is_zero()) p.terms_[ExpVec(d, 0)] = std::move(c);
    return p;
}

OmegaPoly OmegaPoly::variable(int d, int i) {
    OmegaPoly p(d);
    ExpVec e(d, 0);
    e[i] = 1;
    p.terms_[e] = ExactScalar(1);
    return p;
}

bool OmegaPoly::is_constant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && terms_.begin()->first == ExpVec(d_, 0);
}

ExactScalar OmegaPoly::constant_term() const {
    auto it = terms_.find(ExpVec(d_, 0));
    return it == terms_.end() ? ExactScalar() : it->second;
}

int OmegaPoly::total_degree() const {
    int deg = 0;
    for (const auto& [e, c] : terms_)
        deg = std::max(deg, static_cast<int>(std::accumulate(e.begin(), e.end(), 0u)));
    return deg;
}

void OmegaPoly::add_term(const ExpVec& e, const ExactScalar& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.try_emplace(e, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

OmegaPoly OmegaPoly::operator-() const {
    OmegaPoly out(d_);
    for (const auto& [e, c] : terms_) out.terms_[e] = -c;
    return out;
}

OmegaPoly& OmegaPoly::operator+=(const OmegaPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

OmegaPoly& OmegaPoly::operator-=(const OmegaPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

OmegaPoly OmegaPoly::operator*(const OmegaPoly& o) const {
    OmegaPoly out(d_);
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) {
            ExpVec e(d_);
            for (int i = 0; i < d_; ++i) e[i] = e1[i] + e2[i];
            out.add_term(e, c1 * c2);
        }
    return out;
}

OmegaPoly OmegaPoly::scaled(const ExactScalar& c) const {
    OmegaPoly out(d_);
    if (c.is_zero()) return out;
    for (const auto& [e, v] : terms_) out.terms_[e] = v * c;
    return out;
}

OmegaPoly OmegaPoly::times_form(const ExactScalar& c0, const std::vector<long>& J) const {
    OmegaPoly out = scaled(c0);
    for (int i = 0; i < d_; ++i) {
        if (J[i] == 0) continue;
        for (const auto& [e, c] : terms_) {
            ExpVec shifted = e;
            ++shifted[i];
            out.add_term(shifted, c * ExactScalar(J[i]));
        }
    }
    return out;
}

std::optional<OmegaPoly> OmegaPoly::divided_by_form(const ExactScalar& c0,
                                                    const std::vector<long>& J) const {
    int pivot = -1;
    for (int i = 0; i < d_; ++i)
        if (J[i] != 0) {
            pivot = i;
            break;
        }
    if (pivot < 0) throw ResonantDivisor("division by a constant form");
    ExactScalar lead(J[pivot]);

    OmegaPoly rem = *this;
    OmegaPoly quot(d_);
    // Synthetic division, univariate in omega_pivot with the other variables
    // riding along in the coefficients.
    while (true) {
        // highest pivot-degree term group
        unsigned k = 0;
        for (const auto& [e, c] : rem.terms_) k = std::max(k, e[pivot]);
        if (k == 0) break;
        OmegaPoly head(d_);
        for (const auto& [e, c] : rem.terms_)
            if (e[pivot] == k) {
                ExpVec low = e;
                low[pivot] -= 1;
                head.add_term(low, c / lead);
            }
        quot += head;
        // rem -= head * form
        rem -= head.times_form(c0, J);
    }
    if (!rem.is_zero()) return std::nullopt;
    return quot;
}

OmegaPoly OmegaPoly::deriv(int i) const {
    OmegaPoly out(d_);
    for (const auto& [e, c] : terms_) {
        if (e[i] == 0) continue;
        ExpVec low = e;
        --low[i];
        out.add_term(low, c * ExactScalar(static_cast<long>(e[i])));
    }
    return out;
}

double OmegaPoly::eval(const std::vector<double>& omega) const {
    double acc = 0;
    for (const auto& [e, c] : terms_) {
        double t = c.to_double();
        for (int i = 0; i < d_; ++i)
            for (unsigned k = 0; k < e[i]; ++k) t *= omega[i];
        acc += t;
    }
    return acc;
}

ExactScalar OmegaPoly::eval_exact(const std::vector<ExactScalar>& omega) const {
    ExactScalar acc;
    for (const auto& [e, c] : terms_) {
        ExactScalar t = c;
        for (int i = 0; i < d_; ++i)
            for (unsigned k = 0; k < e[i]; ++k) t *= omega[i];
        acc += t;
    }
    return acc;
}

namespace {

std::string omega_name(int d, int i) {
    return d == 1 ? "w" : "w" + std::to_string(i + 1);
}

std::string scalar_factor_str(const ExactScalar& c) {
    std::string s = c.str();
    bool composite = s.find('+') != std::string::npos || s.find('-', 1) != std::string::npos;
    return composite ? "(" + s + ")" : s;
}

}  // namespace

std::string OmegaPoly::str(int d) const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    // highest degree first, reverse map order for readability
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        std::string mono;
        for (int i = 0; i < d; ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += omega_name(d, i);
            if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        }
        std::string cs;
        if (mono.empty())
            cs = c.str();
        else if (c.is_one())
            cs = mono;
        else if ((-c).is_one())
            cs = "-" + mono;
        else
            cs = scalar_factor_str(c) + "*" + mono;
        if (first) {
            out << cs;
            first = false;
        } else if (!cs.empty() && cs[0] == '-') {
            out << " - " << cs.substr(1);
        } else {
            out << " + " << cs;
        }
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// SDElement

SDElement SDElement::zero(CtxPtr ctx) {
    SDElement x;
    x.num_ = OmegaPoly(ctx->dim());
    x.ctx_ = std::move(ctx);
    return x;
}

SDElement SDElement::scalar(CtxPtr ctx, const ExactScalar& c) {
    SDElement x;
    x.num_ = OmegaPoly::constant(ctx->dim(), c);
    x.ctx_ = std::move(ctx);
    return x;
}

SDElement SDElement::omega(CtxPtr ctx, int i) {
    SDElement x;
    x.num_ = OmegaPoly::variable(ctx->dim(), i);
    x.ctx_ = std::move(ctx);
    return x;
}

SDElement SDElement::from_poly(CtxPtr ctx, OmegaPoly num) {
    SDElement x;
    x.num_ = std::move(num);
    x.ctx_ = std::move(ctx);
    return x;
}

ExactScalar SDElement::constant_value() const {
    if (!is_omega_free()) throw DomainError("coefficient is not omega-free");
    return num_.constant_term();
}

ExactScalar SDElement::form_constant(const LinearForm& f) const {
    return ctx_->form_constant(f.coeffs());
}

void SDElement::normalize() {
    if (num_.is_zero()) {
        den_.clear();
        return;
    }
    for (auto it = den_.begin(); it != den_.end();) {
        bool erased = false;
        while (it->second > 0) {
            auto q = num_.divided_by_form(form_constant(it->first), it->first.coeffs());
            if (!q) break;
            num_ = std::move(*q);
            if (--it->second == 0) {
                it = den_.erase(it);
                erased = true;
                break;
            }
        }
        if (!erased) ++it;
    }
}

SDElement SDElement::operator-() const {
    SDElement out = *this;
    out.num_ = -out.num_;
    return out;
}

SDElement& SDElement::operator+=(const SDElement& o) {
    require_same_context(ctx_, o.ctx_);
    // common denominator = multiset lcm
    OmegaPoly left = num_;
    OmegaPoly right = o.num_;
    std::map<LinearForm, unsigned> lcm = den_;
    for (const auto& [f, k] : o.den_) {
        auto it = lcm.find(f);
        unsigned have = (it == lcm.end()) ? 0 : it->second;
        if (k > have) lcm[f] = k;
    }
    for (const auto& [f, k] : lcm) {
        auto mine = den_.find(f);
        unsigned lk = (mine == den_.end()) ? 0 : mine->second;
        auto theirs = o.den_.find(f);
        unsigned rk = (theirs == o.den_.end()) ? 0 : theirs->second;
        ExactScalar c0 = form_constant(f);
        for (unsigned i = lk; i < k; ++i) left = left.times_form(c0, f.coeffs());
        for (unsigned i = rk; i < k; ++i) right = right.times_form(c0, f.coeffs());
    }
    num_ = left + right;
    den_ = std::move(lcm);
    normalize();
    return *this;
}

SDElement& SDElement::operator-=(const SDElement& o) { return *this += -o; }

SDElement& SDElement::operator*=(const SDElement& o) {
    require_same_context(ctx_, o.ctx_);
    num_ = num_ * o.num_;
    for (const auto& [f, k] : o.den_) den_[f] += k;
    normalize();
    return *this;
}

SDElement SDElement::scaled(const ExactScalar& c) const {
    SDElement out = *this;
    out.num_ = out.num_.scaled(c);
    if (out.num_.is_zero()) out.den_.clear();
    return out;
}

SDElement SDElement::divided_by_form(const std::vector<long>& raw_J) const {
    auto [scale, form] = LinearForm::split(raw_J);
    SDElement out = scaled(ExactScalar(1) / ExactScalar(scale));
    if (out.num_.is_zero()) return out;
    out.den_[form] += 1;
    out.normalize();
    return out;
}

SDElement SDElement::deriv_omega(int i) const {
    // d/dw_i (N / prod L^k) = N'/D - sum_k mult * J_i * N / (D * L)
    SDElement out = from_poly(ctx_, num_.deriv(i));
    out.den_ = den_;
    out.normalize();
    for (const auto& [f, k] : den_) {
        long ji = f.coeffs()[i];
        if (ji == 0) continue;
        SDElement t = *this;
        t.num_ = t.num_.scaled(-ExactScalar(static_cast<long>(k) * ji));
        t.den_[f] += 1;
        t.normalize();
        out += t;
    }
    return out;
}

bool SDElement::operator==(const SDElement& o) const {
    return num_ == o.num_ && den_ == o.den_;
}

double SDElement::eval(const std::vector<double>& omega) const {
    double n = num_.eval(omega);
    double d = 1;
    for (const auto& [f, k] : den_) {
        double v = form_constant(f).to_double();
        for (int i = 0; i < ctx_->dim(); ++i) v += static_cast<double>(f.coeffs()[i]) * omega[i];
        if (std::abs(v) < 1e-12)
            throw PoleProximity("evaluation within 1e-12 of resonance hyperplane " + f_str(f));
        for (unsigned j = 0; j < k; ++j) d *= v;
    }
    return n / d;
}

ExactScalar SDElement::eval_exact(const std::vector<ExactScalar>& omega) const {
    ExactScalar n = num_.eval_exact(omega);
    ExactScalar d(1);
    for (const auto& [f, k] : den_) {
        ExactScalar v = form_constant(f);
        for (int i = 0; i < ctx_->dim(); ++i) v += ExactScalar(f.coeffs()[i]) * omega[i];
        if (v.is_zero()) throw PoleProximity("exact evaluation on resonance hyperplane");
        for (unsigned j = 0; j < k; ++j) d *= v;
    }
    return n / d;
}

std::string SDElement::f_str(const LinearForm& f) const {
    std::ostringstream out;
    out << "(" << form_constant(f).str();
    for (int i = 0; i < ctx_->dim(); ++i) {
        long v = f.coeffs()[i];
        if (v == 0) continue;
        out << (v > 0 ? " + " : " - ");
        long a = std::labs(v);
        if (a != 1) out << a << "*";
        out << omega_name(ctx_->dim(), i);
    }
    out << ")";
    return out.str();
}

std::string SDElement::str() const {
    std::string n = num_.str(ctx_ ? ctx_->dim() : 0);
    if (den_.empty()) return n;
    bool wrap = n.find('+') != std::string::npos || n.find('-', 1) != std::string::npos ||
                n.find('*') != std::string::npos || n.find('^') != std::string::npos;
    std::ostringstream out;
    out << (wrap ? "(" + n + ")" : n) << "/";
    bool first = true;
    for (const auto& [f, k] : den_) {
        if (!first) out << "*";
        first = false;
        out << f_str(f);
        if (k > 1) out << "^" << k;
    }
    return out.str();
}

// --------------------------- parsing ---------------------------------------

namespace {

struct PolyParser {
    const CtxPtr& ctx;
    std::string s;
    size_t pos = 0;

    explicit PolyParser(const CtxPtr& c, const std::string& text) : ctx(c), s(strip_ws(text)) {}

    bool eof() const { return pos >= s.size(); }
    char peek() const { return eof() ? '\0' : s[pos]; }

    int var_index(const std::string& name) {
        if (name == "w") {
            if (ctx->dim() != 1) throw ParseError("bare 'w' only valid when d = 1");
            return 0;
        }
        if (name.size() >= 2 && name[0] == 'w') {
            int i = std::stoi(name.substr(1)) - 1;
            if (i < 0 || i >= ctx->dim()) throw ParseError("omega index out of range: " + name);
            return i;
        }
        throw ParseError("unknown variable: " + name);
    }

    // factor := rational | sqrt-literal | (poly) | w-var [^k]
    OmegaPoly parse_factor() {
        if (peek() == '(') {
            int depth = 0;
            size_t start = pos;
            for (; pos < s.size(); ++pos) {
                if (s[pos] == '(') ++depth;
                if (s[pos] == ')' && --depth == 0) break;
            }
            if (pos >= s.size()) throw ParseError("unbalanced parentheses");
            std::string inner = s.substr(start + 1, pos - start - 1);
            ++pos;
            PolyParser sub(ctx, inner);
            OmegaPoly p = sub.parse_poly();
            return maybe_power(std::move(p));
        }
        if (peek() == 'w') {
            size_t start = pos;
            ++pos;
            while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
            int idx = var_index(s.substr(start, pos - start));
            return maybe_power(OmegaPoly::variable(ctx->dim(), idx));
        }
        if (s.compare(pos, 5, "sqrt(") == 0) {
            size_t close = s.find(')', pos);
            if (close == std::string::npos) throw ParseError("unclosed sqrt");
            std::string lit = s.substr(pos, close - pos + 1);
            pos = close + 1;
            return OmegaPoly::constant(ctx->dim(), ExactScalar::parse(lit, ctx->field_m()));
        }
        // rational literal
        size_t start = pos;
        while (!eof() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '/')) ++pos;
        if (pos == start) throw ParseError("expected factor at '" + s.substr(pos) + "'");
        return OmegaPoly::constant(ctx->dim(), ExactScalar(parse_rational(s.substr(start, pos - start))));
    }

    OmegaPoly maybe_power(OmegaPoly base) {
        if (peek() != '^') return base;
        ++pos;
        size_t start = pos;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
        int k = std::stoi(s.substr(start, pos - start));
        OmegaPoly out = OmegaPoly::constant(ctx->dim(), ExactScalar(1));
        for (int i = 0; i < k; ++i) out = out * base;
        return out;
    }

    OmegaPoly parse_term() {
        OmegaPoly acc = parse_factor();
        while (peek() == '*') {
            ++pos;
            acc = acc * parse_factor();
        }
        return acc;
    }

    OmegaPoly parse_poly() {
        OmegaPoly acc(ctx->dim());
        int sign = 1;
        if (peek() == '-') {
            sign = -1;
            ++pos;
        } else if (peek() == '+') {
            ++pos;
        }
        while (true) {
            OmegaPoly t = parse_term();
            acc += (sign < 0) ? -t : t;
            if (eof()) break;
            if (peek() == '+') {
                sign = 1;
                ++pos;
            } else if (peek() == '-') {
                sign = -1;
                ++pos;
            } else {
                throw ParseError("unexpected character '" + std::string(1, peek()) + "' in poly");
            }
        }
        return acc;
    }
};

}  // namespace

SDElement SDElement::parse(CtxPtr ctx, const std::string& text) {
    std::string s = strip_ws(text);
    // split at top-level '/'
    int depth = 0;
    size_t slash = std::string::npos;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (s[i] == '/' && depth == 0) {
            // distinguish rational "1/2" from a denominator: a denominator
            // always starts with '('
            if (i + 1 < s.size() && s[i + 1] == '(') {
                slash = i;
                break;
            }
        }
    }
    std::string num_part = (slash == std::string::npos) ? s : s.substr(0, slash);
    PolyParser np(ctx, num_part);
    OmegaPoly num = np.parse_poly();
    SDElement out = SDElement::from_poly(ctx, std::move(num));
    if (slash == std::string::npos) return out;

    std::string den_part = s.substr(slash + 1);
    size_t i = 0;
    while (i < den_part.size()) {
        if (den_part[i] == '*') {
            ++i;
            continue;
        }
        if (den_part[i] != '(') throw ParseError("denominator factor must be parenthesized");
        int dd = 0;
        size_t start = i;
        for (; i < den_part.size(); ++i) {
            if (den_part[i] == '(') ++dd;
            if (den_part[i] == ')' && --dd == 0) break;
        }
        std::string inner = den_part.substr(start + 1, i - start - 1);
        ++i;
        unsigned mult = 1;
        if (i < den_part.size() && den_part[i] == '^') {
            ++i;
            size_t ks = i;
            while (i < den_part.size() && std::isdigit(static_cast<unsigned char>(den_part[i])))
                ++i;
            mult = static_cast<unsigned>(std::stoul(den_part.substr(ks, i - ks)));
        }
        PolyParser fp(ctx, inner);
        OmegaPoly form_poly = fp.parse_poly();
        // extract covector and validate the constant term
        std::vector<long> J(ctx->dim(), 0);
        for (const auto& [e, c] : form_poly.terms()) {
            unsigned total = std::accumulate(e.begin(), e.end(), 0u);
            if (total == 0) continue;
            if (total != 1) throw ParseError("denominator factor is not linear");
            for (int k = 0; k < ctx->dim(); ++k)
                if (e[k] == 1) {
                    if (!c.is_rational() || c.rational_part().get_den() != 1)
                        throw ParseError("denominator covector must be integer");
                    J[k] = static_cast<long>(c.rational_part().get_num().get_si());
                }
        }
        if (ctx->form_constant(J) != form_poly.constant_term())
            throw ParseError("denominator constant term does not match (alpha, J)");
        for (unsigned k = 0; k < mult; ++k) out = out.divided_by_form(J);
    }
    return out;
}

}  // namespace hamnf
