#pragma once

// Laurent polynomials in one variable t with exact integer coefficients.
// All arithmetic is overflow-checked; braid words long enough to overflow
// 64-bit coefficients are rejected rather than silently wrapped.

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowtopo {

class Laurent {
  public:
    Laurent() = default;  // zero

    static Laurent zero() { return Laurent(); }
    static Laurent one() { return monomial(1, 0); }

    static Laurent monomial(long long coeff, int degree) {
        Laurent p;
        if (coeff != 0) {
            p.low_ = degree;
            p.coeffs_ = {coeff};
        }
        return p;
    }

    static Laurent from_coeffs(std::vector<long long> coeffs, int low_degree) {
        Laurent p;
        p.coeffs_ = std::move(coeffs);
        p.low_ = low_degree;
        p.trim();
        return p;
    }

    bool is_zero() const { return coeffs_.empty(); }
    bool is_one() const { return coeffs_.size() == 1 && coeffs_[0] == 1 && low_ == 0; }

    int low_degree() const { return low_; }
    int high_degree() const { return low_ + static_cast<int>(coeffs_.size()) - 1; }

    long long coeff(int degree) const {
        if (is_zero() || degree < low_ || degree > high_degree()) return 0;
        return coeffs_[degree - low_];
    }

    const std::vector<long long>& coeffs() const { return coeffs_; }

    friend Laurent operator+(const Laurent& a, const Laurent& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        int low = std::min(a.low_, b.low_);
        int high = std::max(a.high_degree(), b.high_degree());
        std::vector<long long> c(high - low + 1, 0);
        for (int d = low; d <= high; ++d) c[d - low] = checked_add(a.coeff(d), b.coeff(d));
        return from_coeffs(std::move(c), low);
    }

    friend Laurent operator-(const Laurent& a) {
        Laurent p = a;
        for (auto& c : p.coeffs_) c = checked_neg(c);
        return p;
    }

    friend Laurent operator-(const Laurent& a, const Laurent& b) { return a + (-b); }

    friend Laurent operator*(const Laurent& a, const Laurent& b) {
        if (a.is_zero() || b.is_zero()) return zero();
        std::vector<long long> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
                c[i + j] = checked_add(c[i + j], checked_mul(a.coeffs_[i], b.coeffs_[j]));
        return from_coeffs(std::move(c), a.low_ + b.low_);
    }

    friend bool operator==(const Laurent& a, const Laurent& b) {
        return a.low_ == b.low_ && a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const Laurent& a, const Laurent& b) { return !(a == b); }

    /// Exact division; throws std::domain_error when the remainder is
    /// nonzero (callers rely on algebraic identities that guarantee
    /// exactness).
    Laurent divided_exact(const Laurent& divisor) const {
        if (divisor.is_zero()) throw std::domain_error("Laurent: division by zero");
        if (is_zero()) return zero();
        // long division from the top; the divisor's leading coefficient must
        // divide every intermediate leading coefficient
        std::vector<long long> rem = coeffs_;
        int rem_low = low_;
        std::vector<long long> quot;
        int qsize = static_cast<int>(coeffs_.size()) - static_cast<int>(divisor.coeffs_.size()) + 1;
        if (qsize < 1) throw std::domain_error("Laurent: division not exact (degree)");
        quot.assign(qsize, 0);
        long long dlead = divisor.coeffs_.back();
        for (int k = qsize - 1; k >= 0; --k) {
            long long lead = rem[k + divisor.coeffs_.size() - 1];
            if (lead % dlead != 0)
                throw std::domain_error("Laurent: division not exact (coefficient)");
            long long q = lead / dlead;
            quot[k] = q;
            for (std::size_t j = 0; j < divisor.coeffs_.size(); ++j)
                rem[k + j] = checked_add(rem[k + j], checked_neg(checked_mul(q, divisor.coeffs_[j])));
        }
        for (long long r : rem)
            if (r != 0) throw std::domain_error("Laurent: division not exact (remainder)");
        return from_coeffs(std::move(quot), rem_low - divisor.low_);
    }

    /// Multiplies by the unit +/- t^k so the lowest degree becomes 0 and the
    /// lowest coefficient is positive. The zero polynomial is unchanged.
    Laurent normalized_units() const {
        if (is_zero()) return zero();
        Laurent p = *this;
        p.low_ = 0;
        if (p.coeffs_.front() < 0)
            for (auto& c : p.coeffs_) c = checked_neg(c);
        return p;
    }

    std::string str() const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (int d = high_degree(); d >= low_; --d) {
            long long c = coeff(d);
            if (c == 0) continue;
            if (!first) os << (c > 0 ? " + " : " - ");
            else if (c < 0) os << "-";
            long long a = c > 0 ? c : -c;
            if (a != 1 || d == 0) os << a;
            if (d != 0) {
                if (a != 1) os << "*";
                os << "t";
                if (d != 1) os << "^" << d;
            }
            first = false;
        }
        return os.str();
    }

  private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
        std::size_t lead0 = 0;
        while (lead0 < coeffs_.size() && coeffs_[lead0] == 0) ++lead0;
        if (lead0 > 0) {
            coeffs_.erase(coeffs_.begin(), coeffs_.begin() + lead0);
            low_ += static_cast<int>(lead0);
        }
        if (coeffs_.empty()) low_ = 0;
    }

    static long long checked_add(long long a, long long b) {
        long long r;
        if (__builtin_add_overflow(a, b, &r))
            throw std::overflow_error("Laurent: coefficient overflow");
        return r;
    }
    static long long checked_mul(long long a, long long b) {
        long long r;
        if (__builtin_mul_overflow(a, b, &r))
            throw std::overflow_error("Laurent: coefficient overflow");
        return r;
    }
    static long long checked_neg(long long a) {
        if (a == INT64_MIN) throw std::overflow_error("Laurent: coefficient overflow");
        return -a;
    }

    std::vector<long long> coeffs_;  // coeffs_[i] multiplies t^(low_ + i)
    int low_ = 0;
};

}  // namespace flowtopo
