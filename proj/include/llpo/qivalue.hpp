#pragma once

// Exact naturals of the shape c + sum of count * base^exponent, where a base
// is either an integer that is not a perfect power or another such value.
// Values far past the point where printing or multiplying them is sensible
// stay in power form; comparisons use cancellation, then certified log2
// intervals, then exact evaluation when both sides fit the digit cap.

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace llpo {

inline constexpr std::size_t kDefaultDigitCap = 100'000;

class MagnitudeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class QIValue;
using QIValuePtr = std::shared_ptr<const QIValue>;

struct PowerTerm {
    mpz_class root;       // base when `symbolic` is null; >= 2 and not a perfect power
    QIValuePtr symbolic;  // otherwise the base
    mpz_class exponent;   // >= 2
};

namespace detail {

inline constexpr unsigned long kLogBits = 512;
// Powers this small are folded into the constant.
inline constexpr double kFoldBits = 100.0;

inline mpf_class mpf(double v) { return mpf_class(v, kLogBits); }

inline mpf_class mpf(const mpz_class& v) {
    mpf_class out(0, kLogBits);
    out = v;
    return out;
}

struct LogRange {
    mpf_class lo{0, kLogBits};
    mpf_class hi{0, kLogBits};
};

/// Enclosure of log2(n) for n >= 1.
inline LogRange log2_range(const mpz_class& n) {
    long e = 0;
    double m = mpz_get_d_2exp(&e, n.get_mpz_t());
    double v = static_cast<double>(e) + std::log2(m);
    double slack = 1e-12 * (std::fabs(v) + 1.0);
    return {mpf(v - slack), mpf(v + slack)};
}

/// Widens a product of enclosures against mpf truncation.
inline void widen(LogRange& r) {
    static const mpf_class down = [] {
        mpf_class x(1, kLogBits);
        mpf_div_2exp(x.get_mpf_t(), x.get_mpf_t(), 400);
        return mpf_class(1 - x, kLogBits);
    }();
    static const mpf_class up = [] {
        mpf_class x(1, kLogBits);
        mpf_div_2exp(x.get_mpf_t(), x.get_mpf_t(), 400);
        return mpf_class(1 + x, kLogBits);
    }();
    r.lo = r.lo * (r.lo >= 0 ? down : up);
    r.hi = r.hi * (r.hi >= 0 ? up : down);
}

/// n = root^k with root not a perfect power, for n >= 2.
inline std::pair<mpz_class, mpz_class> perfect_power_root(mpz_class n) {
    mpz_class k = 1;
    while (mpz_perfect_power_p(n.get_mpz_t())) {
        std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
        bool found = false;
        for (unsigned long j = 2; j <= bits; ++j) {
            mpz_class r;
            if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), j)) {
                n = r;
                k *= j;
                found = true;
                break;
            }
        }
        if (!found) break;
    }
    return {n, k};
}

inline std::size_t decimal_digits(const mpz_class& n) { return mpz_sizeinbase(n.get_mpz_t(), 10); }

inline std::string exponent_to_string(const mpz_class& e) {
    if (decimal_digits(e) <= 30 || e < 2) return e.get_str();
    auto [r, k] = perfect_power_root(e);
    if (k == 1) return e.get_str();
    std::string ks = exponent_to_string(k);
    bool simple = ks.find_first_not_of("0123456789") == std::string::npos;
    return r.get_str() + "^" + (simple ? ks : "(" + ks + ")");
}

}  // namespace detail

class QIValue {
public:
    QIValue() : QIValue(mpz_class(0)) {}
    QIValue(const mpz_class& c) : constant_(c) {
        if (c < 0) throw std::invalid_argument("interpretations are natural numbers");
        refresh();
    }
    QIValue(unsigned long c) : QIValue(mpz_class(c)) {}
    QIValue(int c) : QIValue(mpz_class(c)) {}

    static QIValue from_terms(mpz_class constant, std::vector<std::pair<PowerTerm, std::uint64_t>> terms) {
        QIValue v(constant);
        v.terms_ = std::move(terms);
        v.canonicalize();
        return v;
    }

    const mpz_class& constant() const { return constant_; }
    const std::vector<std::pair<PowerTerm, std::uint64_t>>& terms() const { return terms_; }
    bool is_exact() const { return terms_.empty(); }
    bool is_zero() const { return terms_.empty() && constant_ == 0; }

    /// Enclosure of log2 of the value; meaningless for zero.
    const mpf_class& log2_lo() const { return range_.lo; }
    const mpf_class& log2_hi() const { return range_.hi; }

    /// The exact value, if it needs at most max_bits bits.
    std::optional<mpz_class> exact(std::size_t max_bits) const {
        if (terms_.empty()) return constant_;
        if (range_.hi > static_cast<double>(max_bits)) return std::nullopt;
        mpz_class total = constant_;
        for (const auto& [pt, count] : terms_) {
            mpz_class base;
            if (pt.symbolic) {
                auto b = pt.symbolic->exact(max_bits);
                if (!b) return std::nullopt;
                base = *b;
            } else {
                base = pt.root;
            }
            if (!pt.exponent.fits_ulong_p()) return std::nullopt;
            mpz_class p;
            mpz_pow_ui(p.get_mpz_t(), base.get_mpz_t(), pt.exponent.get_ui());
            total += p * mpz_class(static_cast<unsigned long>(count));
        }
        return total;
    }

    std::string to_string() const {
        std::vector<std::size_t> order(terms_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return term_range(terms_[a].first).hi > term_range(terms_[b].first).hi;
        });
        std::string out;
        for (auto i : order) {
            const auto& [pt, count] = terms_[i];
            if (!out.empty()) out += " + ";
            if (count > 1) out += std::to_string(count) + "*";
            out += pt.symbolic ? "(" + pt.symbolic->to_string() + ")" : pt.root.get_str();
            std::string e = detail::exponent_to_string(pt.exponent);
            bool simple = e.find_first_not_of("0123456789") == std::string::npos;
            out += "^" + (simple ? e : "(" + e + ")");
        }
        if (constant_ != 0 || out.empty()) out += (out.empty() ? "" : " + ") + constant_.get_str();
        return out;
    }

    friend QIValue operator+(const QIValue& a, const QIValue& b) {
        if (a.terms_.empty() && b.terms_.empty()) return QIValue(mpz_class(a.constant_ + b.constant_));
        auto terms = a.terms_;
        terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
        return from_terms(a.constant_ + b.constant_, std::move(terms));
    }

    /// Total order on representations (not on values).
    friend int structural_compare(const QIValue& a, const QIValue& b) {
        if (&a == &b) return 0;
        if (int c = cmp(a.constant_, b.constant_)) return c < 0 ? -1 : 1;
        if (a.terms_.size() != b.terms_.size()) return a.terms_.size() < b.terms_.size() ? -1 : 1;
        for (std::size_t i = 0; i < a.terms_.size(); ++i) {
            if (int c = term_compare(a.terms_[i].first, b.terms_[i].first)) return c;
            if (a.terms_[i].second != b.terms_[i].second) return a.terms_[i].second < b.terms_[i].second ? -1 : 1;
        }
        return 0;
    }

    friend bool operator==(const QIValue& a, const QIValue& b) { return structural_compare(a, b) == 0; }

    static int term_compare(const PowerTerm& a, const PowerTerm& b) {
        if (!a.symbolic != !b.symbolic) return a.symbolic ? 1 : -1;
        if (a.symbolic) {
            if (a.symbolic != b.symbolic)
                if (int c = structural_compare(*a.symbolic, *b.symbolic)) return c;
        } else if (int c = cmp(a.root, b.root)) {
            return c < 0 ? -1 : 1;
        }
        if (int c = cmp(a.exponent, b.exponent)) return c < 0 ? -1 : 1;
        return 0;
    }

    static detail::LogRange term_range(const PowerTerm& pt) {
        detail::LogRange base = pt.symbolic ? pt.symbolic->range_ : detail::log2_range(pt.root);
        mpf_class e = detail::mpf(pt.exponent);
        detail::LogRange r{base.lo * e, base.hi * e};
        detail::widen(r);
        return r;
    }

private:
    void canonicalize() {
        std::sort(terms_.begin(), terms_.end(),
                  [](const auto& x, const auto& y) { return term_compare(x.first, y.first) < 0; });
        std::vector<std::pair<PowerTerm, std::uint64_t>> merged;
        for (auto& t : terms_) {
            if (t.second == 0) continue;
            if (!merged.empty() && term_compare(merged.back().first, t.first) == 0)
                merged.back().second += t.second;
            else
                merged.push_back(std::move(t));
        }
        terms_ = std::move(merged);
        refresh();
    }

    void refresh() {
        if (is_zero()) return;
        std::uint64_t items = constant_ > 0 ? 1 : 0;
        bool first = true;
        auto take = [&](const detail::LogRange& r) {
            if (first || r.lo > range_.lo) range_.lo = r.lo;
            if (first || r.hi > range_.hi) range_.hi = r.hi;
            first = false;
        };
        if (constant_ > 0) take(detail::log2_range(constant_));
        for (const auto& [pt, count] : terms_) {
            auto r = term_range(pt);
            auto c = detail::log2_range(mpz_class(static_cast<unsigned long>(count)));
            take({r.lo + c.lo, r.hi + c.hi});
            items += count;
        }
        if (items > 1) range_.hi += detail::log2_range(mpz_class(static_cast<unsigned long>(items))).hi;
    }

    mpz_class constant_;
    std::vector<std::pair<PowerTerm, std::uint64_t>> terms_;
    detail::LogRange range_;
};

inline int term_compare(const PowerTerm& a, const PowerTerm& b) { return QIValue::term_compare(a, b); }

/// Removes what both sides share, term by term and from the constants.
inline std::pair<QIValue, QIValue> cancel_common(const QIValue& a, const QIValue& b) {
    std::vector<std::pair<PowerTerm, std::uint64_t>> ra, rb;
    const auto& ta = a.terms();
    const auto& tb = b.terms();
    std::size_t i = 0, j = 0;
    while (i < ta.size() || j < tb.size()) {
        int c = i == ta.size() ? 1 : j == tb.size() ? -1 : term_compare(ta[i].first, tb[j].first);
        if (c < 0) {
            ra.push_back(ta[i++]);
        } else if (c > 0) {
            rb.push_back(tb[j++]);
        } else {
            auto m = std::min(ta[i].second, tb[j].second);
            if (ta[i].second > m) ra.push_back({ta[i].first, ta[i].second - m});
            if (tb[j].second > m) rb.push_back({tb[j].first, tb[j].second - m});
            ++i;
            ++j;
        }
    }
    mpz_class m = std::min(a.constant(), b.constant());
    return {QIValue::from_terms(a.constant() - m, std::move(ra)), QIValue::from_terms(b.constant() - m, std::move(rb))};
}

inline std::strong_ordering order_of(const mpz_class& a, const mpz_class& b) {
    int c = cmp(a, b);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

inline std::size_t digits_to_bits(std::size_t digits) {
    return static_cast<std::size_t>(std::ceil(static_cast<double>(digits) * 3.3219280948873623));
}

/// Numeric comparison, or nothing when neither the log2 enclosures nor
/// exact evaluation within the digit cap can separate the values.
inline std::optional<std::strong_ordering> compare(const QIValue& a, const QIValue& b,
                                                   std::size_t digit_cap = kDefaultDigitCap) {
    if (a == b) return std::strong_ordering::equal;
    auto [x, y] = cancel_common(a, b);
    if (x.is_zero() && y.is_zero()) return std::strong_ordering::equal;
    if (x.is_zero()) return std::strong_ordering::less;
    if (y.is_zero()) return std::strong_ordering::greater;
    if (x.is_exact() && y.is_exact()) return order_of(x.constant(), y.constant());
    if (x.log2_lo() > y.log2_hi()) return std::strong_ordering::greater;
    if (y.log2_lo() > x.log2_hi()) return std::strong_ordering::less;
    std::size_t bits = digits_to_bits(digit_cap);
    auto ex = x.exact(bits);
    if (!ex) return std::nullopt;
    auto ey = y.exact(bits);
    if (!ey) return std::nullopt;
    return order_of(*ex, *ey);
}

inline QIValue qi_max(const QIValue& a, const QIValue& b, std::size_t digit_cap = kDefaultDigitCap) {
    auto c = compare(a, b, digit_cap);
    if (!c) throw MagnitudeError("cannot order " + a.to_string() + " and " + b.to_string() + " within the digit cap");
    return *c == std::strong_ordering::less ? b : a;
}

/// base^e, staying in power form when the result is large.
inline QIValue power(const QIValue& base, const mpz_class& e, std::size_t digit_cap = kDefaultDigitCap) {
    if (e == 0) return QIValue(1);
    if (e == 1 || base.is_zero() || (base.is_exact() && base.constant() == 1)) return base;
    if (detail::decimal_digits(e) > digit_cap)
        throw MagnitudeError("exponent with " + std::to_string(detail::decimal_digits(e)) +
                             " digits exceeds the digit cap");
    if (base.is_exact()) {
        auto [r, k] = detail::perfect_power_root(base.constant());
        mpz_class exp = k * e;
        double bits = mpz_get_d(exp.get_mpz_t()) * std::log2(mpz_get_d(r.get_mpz_t()));
        if (bits <= detail::kFoldBits) {
            mpz_class out;
            mpz_pow_ui(out.get_mpz_t(), r.get_mpz_t(), exp.get_ui());
            return QIValue(out);
        }
        return QIValue::from_terms(0, {{PowerTerm{r, nullptr, exp}, 1}});
    }
    if (base.constant() == 0 && base.terms().size() == 1 && base.terms()[0].second == 1) {
        PowerTerm pt = base.terms()[0].first;
        pt.exponent *= e;
        if (detail::decimal_digits(pt.exponent) > digit_cap)
            throw MagnitudeError("exponent exceeds the digit cap");
        return QIValue::from_terms(0, {{std::move(pt), 1}});
    }
    return QIValue::from_terms(0, {{PowerTerm{0, std::make_shared<const QIValue>(base), e}, 1}});
}

inline std::ostream& operator<<(std::ostream& os, const QIValue& v) { return os << v.to_string(); }

}  // namespace llpo
