#include "viscount/scalar.h"

#include <cctype>
#include <stdexcept>

namespace viscount {

Rat make_rat(long num, long den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

Rat rat_from_string(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty scalar literal");

    std::string::size_type slash = text.find('/');
    if (slash != std::string::npos) {
        std::string num = text.substr(0, slash);
        std::string den = text.substr(slash + 1);
        if (num.empty() || den.empty())
            throw std::invalid_argument("malformed fraction: " + text);
        Rat r{mpz_class(num, 10), mpz_class(den, 10)};
        if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
        r.canonicalize();
        return r;
    }

    std::string::size_type dot = text.find('.');
    if (dot == std::string::npos) {
        for (std::string::size_type i = 0; i < text.size(); ++i) {
            char c = text[i];
            if (i == 0 && (c == '-' || c == '+')) continue;
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw std::invalid_argument("malformed number: " + text);
        }
        if (text == "-" || text == "+") throw std::invalid_argument("malformed number: " + text);
        return Rat(mpz_class(text, 10));
    }

    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::string frac = text.substr(dot + 1);
    if (digits.empty() || digits == "-" || digits == "+")
        throw std::invalid_argument("malformed number: " + text);
    for (std::string::size_type i = 0; i < digits.size(); ++i) {
        char c = digits[i];
        if (i == 0 && (c == '-' || c == '+')) continue;
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw std::invalid_argument("malformed number: " + text);
    }
    mpz_class den(1);
    for (std::string::size_type i = 0; i < frac.size(); ++i) den *= 10;
    Rat r{mpz_class(digits, 10), den};
    r.canonicalize();
    return r;
}

std::string rat_to_string(const Rat& v) {
    if (v.get_den() == 1) return v.get_num().get_str();
    return v.get_num().get_str() + "/" + v.get_den().get_str();
}

std::string rat_to_decimal(const Rat& v) {
    mpz_class den = v.get_den();
    if (den == 1) return v.get_num().get_str();

    // Count factors of 2 and 5; only those yield a finite decimal.
    mpz_class d = den;
    int twos = 0, fives = 0;
    while (mpz_divisible_ui_p(d.get_mpz_t(), 2)) { d /= 2; ++twos; }
    while (mpz_divisible_ui_p(d.get_mpz_t(), 5)) { d /= 5; ++fives; }
    if (d != 1) return rat_to_string(v);

    int digits = twos > fives ? twos : fives;
    mpz_class scale(1);
    for (int i = 0; i < digits; ++i) scale *= 10;
    mpz_class scaled = v.get_num() * (scale / den);

    bool neg = scaled < 0;
    mpz_class mag = neg ? mpz_class(-scaled) : scaled;
    std::string s = mag.get_str();
    if (static_cast<int>(s.size()) <= digits)
        s.insert(0, static_cast<std::string::size_type>(digits + 1 - s.size()), '0');
    s.insert(s.size() - static_cast<std::string::size_type>(digits), ".");
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return neg ? "-" + s : s;
}

Rat rat_from_dyadic(std::uint64_t num, unsigned shift) {
    mpz_class n;
    mpz_import(n.get_mpz_t(), 1, 1, sizeof(num), 0, 0, &num);
    mpz_class d(1);
    d <<= shift;
    Rat r(n, d);
    r.canonicalize();
    return r;
}

} // namespace viscount
