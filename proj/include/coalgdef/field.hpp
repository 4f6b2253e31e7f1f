#ifndef COALGDEF_FIELD_HPP
#define COALGDEF_FIELD_HPP

// Exact ground fields. A field is a small descriptor object that knows how to
// make and print its scalars; the scalars themselves carry ordinary operator
// arithmetic. The default-constructed scalar of every field is zero.

#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace coalgdef {

template <class F>
concept Field = requires(const F& f, const typename F::scalar& s, std::int64_t k, std::string_view text) {
    typename F::scalar;
    { f.zero() } -> std::same_as<typename F::scalar>;
    { f.one() } -> std::same_as<typename F::scalar>;
    { f.from_int(k) } -> std::same_as<typename F::scalar>;
    { f.parse(text) } -> std::same_as<typename F::scalar>;
    { f.format(s) } -> std::same_as<std::string>;
    { f.name() } -> std::same_as<std::string>;
};

template <Field F>
using scalar_t = typename F::scalar;

// ---------------------------------------------------------------------------
// Rationals

inline bool is_zero(const mpq_class& x) { return sgn(x) == 0; }

namespace detail {

inline mpz_class parse_integer(std::string_view text)
{
    std::string s(text);
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (start == s.size())
        throw std::invalid_argument("malformed scalar '" + s + "'");
    for (std::size_t i = start; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9')
            throw std::invalid_argument("malformed scalar '" + s + "'");
    if (s[0] == '+')
        s.erase(0, 1);
    return mpz_class(s, 10);
}

// Splits "a/b" (or "a") into numerator and nonzero denominator.
inline std::pair<mpz_class, mpz_class> parse_fraction(std::string_view text)
{
    auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return {parse_integer(text), mpz_class(1)};
    mpz_class num = parse_integer(text.substr(0, slash));
    std::string_view den_text = text.substr(slash + 1);
    if (!den_text.empty() && (den_text[0] == '-' || den_text[0] == '+'))
        throw std::invalid_argument("malformed scalar '" + std::string(text) + "'");
    mpz_class den = parse_integer(den_text);
    if (den == 0)
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return {num, den};
}

} // namespace detail

struct RationalField {
    using scalar = mpq_class;

    scalar zero() const { return scalar(0); }
    scalar one() const { return scalar(1); }
    scalar from_int(std::int64_t k) const { return scalar(mpz_class(std::to_string(k), 10)); }

    scalar parse(std::string_view text) const
    {
        auto [num, den] = detail::parse_fraction(text);
        scalar q(num, den);
        q.canonicalize();
        return q;
    }

    std::string format(const scalar& x) const { return x.get_str(); }
    std::string name() const { return "rational"; }

    bool operator==(const RationalField&) const = default;
};

// ---------------------------------------------------------------------------
// Prime fields GF(p), p chosen at run time.

/// Element of GF(p). The element carries its modulus; a modulus of 0 marks
/// the field-independent zero produced by default construction, which
/// combines with elements of any GF(p).
struct ModP {
    std::uint64_t value = 0;
    std::uint64_t modulus = 0;

    ModP() = default;
    ModP(std::uint64_t v, std::uint64_t p) : value(p ? v % p : 0), modulus(p) {}

    friend ModP operator+(const ModP& a, const ModP& b)
    {
        std::uint64_t p = common(a, b);
        if (p == 0)
            return {};
        std::uint64_t s = a.value + b.value;
        return raw(s >= p ? s - p : s, p);
    }
    friend ModP operator-(const ModP& a) { return a.value == 0 ? a : raw(a.modulus - a.value, a.modulus); }
    friend ModP operator-(const ModP& a, const ModP& b) { return a + (-b); }
    friend ModP operator*(const ModP& a, const ModP& b)
    {
        std::uint64_t p = common(a, b);
        if (p == 0)
            return {};
        auto prod = static_cast<unsigned __int128>(a.value) * b.value;
        return raw(static_cast<std::uint64_t>(prod % p), p);
    }
    friend ModP operator/(const ModP& a, const ModP& b) { return a * b.inverse(); }

    ModP& operator+=(const ModP& o) { return *this = *this + o; }
    ModP& operator-=(const ModP& o) { return *this = *this - o; }
    ModP& operator*=(const ModP& o) { return *this = *this * o; }
    ModP& operator/=(const ModP& o) { return *this = *this / o; }

    friend bool operator==(const ModP& a, const ModP& b)
    {
        if (a.value != b.value)
            return false;
        return a.value == 0 || a.modulus == b.modulus;
    }

    ModP inverse() const
    {
        if (value == 0)
            throw std::domain_error("division by zero in GF(p)");
        // Fermat: a^(p-2)
        return pow(modulus - 2);
    }

    ModP pow(std::uint64_t e) const
    {
        ModP base = *this, acc = raw(1 % modulus, modulus);
        while (e) {
            if (e & 1)
                acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

private:
    static ModP raw(std::uint64_t v, std::uint64_t p)
    {
        ModP r;
        r.value = v;
        r.modulus = p;
        return r;
    }

    static std::uint64_t common(const ModP& a, const ModP& b)
    {
        if (a.modulus && b.modulus && a.modulus != b.modulus)
            throw std::domain_error("mixing elements of different prime fields");
        return a.modulus ? a.modulus : b.modulus;
    }
};

inline bool is_zero(const ModP& x) { return x.value == 0; }

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m)
{
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1)
            r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

} // namespace detail

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
inline bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0)
            return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = detail::powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = detail::mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

class PrimeField {
public:
    using scalar = ModP;

    static constexpr std::uint64_t max_modulus = std::uint64_t(1) << 62;

    explicit PrimeField(std::uint64_t p) : p_(p)
    {
        if (p >= max_modulus || !is_prime(p))
            throw std::invalid_argument("GF(p) needs a prime p < 2^62, got " + std::to_string(p));
    }

    std::uint64_t modulus() const { return p_; }

    scalar zero() const { return ModP(0, p_); }
    scalar one() const { return ModP(1, p_); }
    scalar from_int(std::int64_t k) const
    {
        auto p = static_cast<std::int64_t>(p_);
        std::int64_t r = k % p;
        return ModP(static_cast<std::uint64_t>(r < 0 ? r + p : r), p_);
    }

    scalar parse(std::string_view text) const
    {
        auto [num, den] = detail::parse_fraction(text);
        mpz_class p(std::to_string(p_), 10);
        mpz_class n = num % p, d = den % p;
        if (n < 0)
            n += p;
        if (d < 0)
            d += p;
        if (d == 0)
            throw std::invalid_argument("denominator of '" + std::string(text) + "' vanishes mod " +
                                        std::to_string(p_));
        ModP a(std::stoull(n.get_str()), p_), b(std::stoull(d.get_str()), p_);
        return a / b;
    }

    std::string format(const scalar& x) const { return std::to_string(x.value); }
    std::string name() const { return "prime:" + std::to_string(p_); }

    bool operator==(const PrimeField&) const = default;

private:
    std::uint64_t p_;
};

} // namespace coalgdef

#endif
