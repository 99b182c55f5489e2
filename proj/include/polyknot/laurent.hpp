#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

namespace polyknot {

// Sparse two-variable Laurent polynomial with integer coefficients in the
// HOMFLY variables (l, m).  Exponent pairs map to nonzero coefficients,
// canonically ordered by (l-exponent, m-exponent).
class LaurentPoly2 {
  public:
    using Exp = std::pair<int, int>;  // (l exponent, m exponent)
    using Terms = std::map<Exp, std::int64_t>;

    LaurentPoly2() = default;
    LaurentPoly2(std::int64_t c, int i, int j) {
        if (c != 0) terms_[{i, j}] = c;
    }
    static LaurentPoly2 one() { return LaurentPoly2(1, 0, 0); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const {
        return terms_.size() == 1 && terms_.begin()->first == Exp{0, 0} &&
               terms_.begin()->second == 1;
    }

    bool operator==(const LaurentPoly2& o) const { return terms_ == o.terms_; }

    LaurentPoly2& operator+=(const LaurentPoly2& o) {
        for (const auto& [e, c] : o.terms_) add_term(c, e.first, e.second);
        return *this;
    }
    LaurentPoly2 operator+(const LaurentPoly2& o) const {
        LaurentPoly2 r = *this;
        r += o;
        return r;
    }
    LaurentPoly2 operator-(const LaurentPoly2& o) const {
        LaurentPoly2 r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(-c, e.first, e.second);
        return r;
    }

    LaurentPoly2 operator*(const LaurentPoly2& o) const {
        LaurentPoly2 r;
        for (const auto& [ea, ca] : terms_)
            for (const auto& [eb, cb] : o.terms_)
                r.add_term(ca * cb, ea.first + eb.first, ea.second + eb.second);
        return r;
    }

    // Multiply by the monomial c * l^i * m^j.
    LaurentPoly2 mono_mul(std::int64_t c, int i, int j) const {
        LaurentPoly2 r;
        if (c == 0) return r;
        for (const auto& [e, k] : terms_) r.terms_[{e.first + i, e.second + j}] = k * c;
        return r;
    }

    void add_term(std::int64_t c, int i, int j) {
        if (c == 0) return;
        auto it = terms_.find({i, j});
        if (it == terms_.end()) {
            terms_[{i, j}] = c;
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    // Substitute l -> 1/l; the polynomial of the mirror image.
    LaurentPoly2 mirror() const {
        LaurentPoly2 r;
        for (const auto& [e, c] : terms_) r.terms_[{-e.first, e.second}] = c;
        return r;
    }

    // Canonical tally key: terms sorted by (l-exponent, m-exponent).
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            if (!first) os << " + ";
            os << c << "*l^" << e.first << "*m^" << e.second;
            first = false;
        }
        return os.str();
    }

    // Exact division: returns the quotient when o divides this exactly.
    std::optional<LaurentPoly2> divide_exact(const LaurentPoly2& o) const {
        if (o.is_zero()) return std::nullopt;
        if (is_zero()) return LaurentPoly2();
        // Lowest exponents are additive under multiplication, so shifting
        // both operands to min exponent (0,0) reduces exact Laurent division
        // to exact polynomial division.
        auto min_exp = [](const Terms& t) {
            int mi = t.begin()->first.first, mj = t.begin()->first.second;
            for (const auto& [e, c] : t) {
                mi = std::min(mi, e.first);
                mj = std::min(mj, e.second);
            }
            return Exp{mi, mj};
        };
        const Exp pmin = min_exp(terms_);
        const Exp qmin = min_exp(o.terms_);
        LaurentPoly2 rem = mono_mul(1, -pmin.first, -pmin.second);
        const LaurentPoly2 div = o.mono_mul(1, -qmin.first, -qmin.second);
        const auto lead = std::prev(div.terms_.end());  // lex-largest term of divisor
        LaurentPoly2 quot;
        while (!rem.is_zero()) {
            const auto rlead = std::prev(rem.terms_.end());
            const int di = rlead->first.first - lead->first.first;
            const int dj = rlead->first.second - lead->first.second;
            if (di < 0 || dj < 0) return std::nullopt;
            if (rlead->second % lead->second != 0) return std::nullopt;
            const std::int64_t c = rlead->second / lead->second;
            quot.add_term(c, di, dj);
            rem = rem - div.mono_mul(c, di, dj);
        }
        return quot.mono_mul(1, pmin.first - qmin.first, pmin.second - qmin.second);
    }

    // Inverse of to_string; accepts only that exact format.
    static std::optional<LaurentPoly2> parse(const std::string& s) {
        LaurentPoly2 p;
        if (s == "0") return p;
        std::istringstream is(s);
        std::string term;
        while (std::getline(is, term, '+')) {
            std::istringstream ts(term);
            long long c = 0;
            int i = 0, j = 0;
            char star1, l, caret1, star2, m, caret2;
            ts >> c >> star1 >> l >> caret1 >> i >> star2 >> m >> caret2 >> j;
            if (!ts || star1 != '*' || l != 'l' || caret1 != '^' || star2 != '*' ||
                m != 'm' || caret2 != '^')
                return std::nullopt;
            p.add_term(c, i, j);
        }
        if (p.to_string() != s) return std::nullopt;
        return p;
    }

  private:
    Terms terms_;
};

}  // namespace polyknot
