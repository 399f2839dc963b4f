#include "legrecon/poly.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <sstream>
#include <stdexcept>

namespace legrecon {

namespace {

// Dense polynomials, low to high, no trailing zeros (the zero polynomial is empty).
using Dense = std::vector<u64>;

void trim(Dense& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Dense derivative(const Dense& a, const PrimeModulus& m) {
    Dense out;
    for (std::size_t i = 1; i < a.size(); ++i) out.push_back(m.mul(a[i], m.reduce(i)));
    trim(out);
    return out;
}

// a mod b, b nonzero.
Dense remainder(Dense a, const Dense& b, const PrimeModulus& m) {
    const u64 lead_inv = m.inv(b.back());
    while (a.size() >= b.size()) {
        const u64 factor = m.mul(a.back(), lead_inv);
        const std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) {
            a[shift + i] = m.sub(a[shift + i], m.mul(factor, b[i]));
        }
        trim(a);
    }
    return a;
}

Dense make_monic(Dense a, const PrimeModulus& m) {
    if (a.empty()) return a;
    const u64 lead_inv = m.inv(a.back());
    for (auto& c : a) c = m.mul(c, lead_inv);
    return a;
}

Dense gcd(Dense a, Dense b, const PrimeModulus& m) {
    while (!b.empty()) {
        Dense r = remainder(a, b, m);
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(std::move(a), m);
}

Dense multiply(const Dense& a, const Dense& b, const PrimeModulus& m) {
    if (a.empty() || b.empty()) return {};
    Dense out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] = m.add(out[i + j], m.mul(a[i], b[j]));
        }
    }
    return out;
}

Dense dense_of(std::span<const u64> coeffs) {
    Dense out(coeffs.begin(), coeffs.end());
    out.push_back(1);
    return out;
}

}  // namespace

MonicPoly::MonicPoly(std::vector<u64> coeffs, const PrimeModulus& modulus)
    : coeffs_(std::move(coeffs)), modulus_(modulus) {
    if (coeffs_.empty()) throw std::invalid_argument("monic polynomial needs degree >= 1");
    for (auto& c : coeffs_) c = modulus_.reduce(c);
}

MonicPoly MonicPoly::monomial(unsigned d, const PrimeModulus& modulus) {
    return MonicPoly(std::vector<u64>(d, 0), modulus);
}

std::vector<u64> MonicPoly::dense() const { return dense_of(coeffs_); }

bool lex_less(const MonicPoly& a, const MonicPoly& b) noexcept {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return std::lexicographical_compare(a.coeffs_.rbegin(), a.coeffs_.rend(), b.coeffs_.rbegin(),
                                        b.coeffs_.rend());
}

u64 eval_raw(std::span<const u64> coeffs, const PrimeModulus& m, u64 x) noexcept {
    u64 acc = 1;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = m.add(m.mul(acc, x), coeffs[i]);
    return acc;
}

FpElement eval(const MonicPoly& f, const FpElement& x) {
    return {eval_raw(f.coeffs(), f.modulus(), x.value()), f.modulus()};
}

MonicPoly mul(const MonicPoly& g, const MonicPoly& h) {
    if (!(g.modulus() == h.modulus())) throw std::invalid_argument("mul: moduli differ");
    Dense prod = multiply(g.dense(), h.dense(), g.modulus());
    prod.pop_back();
    return MonicPoly(std::move(prod), g.modulus());
}

bool is_squarefree_raw(std::span<const u64> coeffs, const PrimeModulus& m) {
    if (coeffs.size() == 1) return true;
    const Dense f = dense_of(coeffs);
    const Dense df = derivative(f, m);
    if (df.empty()) return false;  // f is a p-th power
    return gcd(f, df, m).size() == 1;
}

bool is_squarefree(const MonicPoly& f) { return is_squarefree_raw(f.coeffs(), f.modulus()); }

bool is_perfect_square_raw(std::span<const u64> coeffs, const PrimeModulus& m) {
    constexpr unsigned kMaxHalf = ForwardDifferenceEvaluator::kMaxDegree;
    const unsigned deg = static_cast<unsigned>(coeffs.size());
    if (deg % 2 != 0) return false;
    const unsigned half = deg / 2;
    if (half > kMaxHalf) throw std::invalid_argument("degree too large for perfect-square test");
    auto target = [&](unsigned i) { return i == deg ? u64{1} : coeffs[i]; };
    const u64 inv2 = (m.value() + 1) / 2;
    // root[half] = 1; coefficient of X^{deg-j} in root^2 is
    // 2*root[half-j] + sum_{i=1}^{j-1} root[half-i]*root[half-j+i].
    u64 root[kMaxHalf + 1] = {};
    root[half] = 1;
    for (unsigned j = 1; j <= half; ++j) {
        u64 cross = 0;
        for (unsigned i = 1; i < j; ++i) cross = m.add(cross, m.mul(root[half - i], root[half - j + i]));
        root[half - j] = m.mul(m.sub(target(deg - j), cross), inv2);
    }
    // The top half matches by construction; check the low coefficients.
    for (unsigned k = 0; k < half; ++k) {
        u64 acc = 0;
        for (unsigned i = 0; i <= k; ++i) acc = m.add(acc, m.mul(root[i], root[k - i]));
        if (acc != target(k)) return false;
    }
    return true;
}

bool is_perfect_square(const MonicPoly& f) { return is_perfect_square_raw(f.coeffs(), f.modulus()); }

ForwardDifferenceEvaluator::ForwardDifferenceEvaluator(std::span<const u64> coeffs,
                                                       const PrimeModulus& m, u64 x0)
    : degree_(static_cast<unsigned>(coeffs.size())), p_(m.value()) {
    if (degree_ > kMaxDegree) throw std::invalid_argument("degree too large for difference table");
    for (unsigned j = 0; j <= degree_; ++j) diff_[j] = eval_raw(coeffs, m, m.add(x0 % p_, m.reduce(j)));
    // In-place differencing leaves diff_[i] = Delta^i f(x0).
    for (unsigned level = 1; level <= degree_; ++level) {
        for (unsigned j = degree_; j >= level; --j) diff_[j] = m.sub(diff_[j], diff_[j - 1]);
    }
}

MonicSpace::MonicSpace(const PrimeModulus& modulus, unsigned d, const Budget& budget)
    : modulus_(modulus), degree_(d), size_(1) {
    if (d == 0) throw std::invalid_argument("degree must be >= 1");
    budget.check(power_as_double(modulus.value(), d), "monic enumeration p^d");
    for (unsigned i = 0; i < d; ++i) size_ *= modulus.value();
}

void MonicSpace::coeffs_at(u64 index, std::span<u64> out) const noexcept {
    const u64 p = modulus_.value();
    for (unsigned i = 0; i < degree_; ++i) {
        out[i] = index % p;
        index /= p;
    }
}

MonicPoly MonicSpace::at(u64 index) const {
    if (index >= size_) throw std::out_of_range("MonicSpace index");
    std::vector<u64> c(degree_);
    coeffs_at(index, c);
    return MonicPoly(std::move(c), modulus_);
}

u64 MonicSpace::index_of(const MonicPoly& f) const {
    if (f.degree() != degree_ || !(f.modulus() == modulus_)) {
        throw std::invalid_argument("polynomial outside this space");
    }
    u64 index = 0;
    for (std::size_t i = degree_; i-- > 0;) index = index * modulus_.value() + f.coeffs()[i];
    return index;
}

void MonicSpace::for_each(u64 begin, u64 end, bool squarefree_only,
                          const std::function<void(u64, std::span<const u64>)>& fn) const {
    end = std::min(end, size_);
    if (begin >= end) return;
    const u64 p = modulus_.value();
    std::vector<u64> c(degree_);
    coeffs_at(begin, c);
    for (u64 index = begin; index < end; ++index) {
        if (!squarefree_only || is_squarefree_raw(c, modulus_)) fn(index, c);
        // Odometer increment, s_0 fastest.
        for (unsigned i = 0; i < degree_; ++i) {
            if (++c[i] < p) break;
            c[i] = 0;
        }
    }
}

std::vector<MonicPoly> enumerate_monic(unsigned d, const PrimeModulus& modulus,
                                       bool squarefree_only, const Budget& budget) {
    const MonicSpace space(modulus, d, budget);
    std::vector<MonicPoly> out;
    space.for_each(0, space.size(), squarefree_only, [&](u64, std::span<const u64> c) {
        out.emplace_back(std::vector<u64>(c.begin(), c.end()), modulus);
    });
    return out;
}

MonicPoly CandidateSet::poly(std::size_t i) const {
    const auto c = coeffs(i);
    return MonicPoly(std::vector<u64>(c.begin(), c.end()), modulus);
}

CandidateSet squarefree_candidates(const PrimeModulus& modulus, unsigned d, const Budget& budget) {
    const MonicSpace space(modulus, d, budget);
    CandidateSet set{modulus, d, {}};
    set.flat.reserve(space.size() * d);
    space.for_each(0, space.size(), true, [&](u64, std::span<const u64> c) {
        set.flat.insert(set.flat.end(), c.begin(), c.end());
    });
    return set;
}

std::string to_string(const MonicPoly& f) {
    std::ostringstream os;
    const unsigned d = f.degree();
    os << "x";
    if (d > 1) os << "^" << d;
    for (unsigned i = d; i-- > 0;) {
        const u64 c = f.coeffs()[i];
        if (c == 0) continue;
        os << " + ";
        if (i == 0) {
            os << c;
            continue;
        }
        if (c != 1) os << c << "*";
        os << "x";
        if (i > 1) os << "^" << i;
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const MonicPoly& f) { return os << to_string(f); }

namespace {

[[noreturn]] void parse_error(std::string_view text, const std::string& why) {
    throw std::invalid_argument("cannot parse polynomial '" + std::string(text) + "': " + why);
}

std::int64_t parse_int(std::string_view token, std::string_view text) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size()) parse_error(text, "bad integer '" + std::string(token) + "'");
    return v;
}

MonicPoly parse_coefficient_list(std::string_view text, unsigned d, const PrimeModulus& m) {
    std::vector<u64> coeffs;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        const std::string_view token = text.substr(start, comma - start);
        coeffs.push_back(m.reduce_signed(parse_int(token, text)));
        start = comma + 1;
    }
    if (coeffs.size() != d) {
        parse_error(text, "expected " + std::to_string(d) + " coefficients (s_0,...,s_{d-1})");
    }
    return MonicPoly(std::move(coeffs), m);
}

}  // namespace

MonicPoly parse_poly(std::string_view text, unsigned d, const PrimeModulus& m) {
    std::string s;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(static_cast<char>(std::tolower(ch)));
    }
    if (s.empty()) parse_error(text, "empty");
    if (s.find('x') == std::string::npos) return parse_coefficient_list(s, d, m);

    std::map<unsigned, u64> terms;
    std::size_t pos = 0;
    while (pos < s.size()) {
        int sign = 1;
        if (s[pos] == '+' || s[pos] == '-') {
            sign = s[pos] == '-' ? -1 : 1;
            ++pos;
        } else if (pos != 0) {
            parse_error(text, "expected '+' or '-'");
        }
        const std::size_t next = s.find_first_of("+-", pos);
        const std::string_view term = std::string_view(s).substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        if (term.empty()) parse_error(text, "empty term");
        pos = next == std::string::npos ? s.size() : next;

        std::int64_t coeff = 1;
        unsigned power = 0;
        const std::size_t xpos = term.find('x');
        if (xpos == std::string_view::npos) {
            coeff = parse_int(term, text);
        } else {
            std::string_view head = term.substr(0, xpos);
            if (!head.empty() && head.back() == '*') head.remove_suffix(1);
            if (!head.empty()) coeff = parse_int(head, text);
            std::string_view tail = term.substr(xpos + 1);
            power = 1;
            if (!tail.empty()) {
                if (tail.front() != '^') parse_error(text, "expected '^' after x");
                power = static_cast<unsigned>(parse_int(tail.substr(1), text));
            }
        }
        auto& slot = terms[power];
        slot = m.add(slot, m.reduce_signed(sign * coeff));
    }
    if (terms.rbegin()->first != d || terms.rbegin()->second != 1) {
        // Allow an explicit leading coefficient only if it reduces to 1 at degree d.
        const auto it = terms.find(d);
        if (it == terms.end() || it->second != 1) parse_error(text, "not monic of degree " + std::to_string(d));
        for (auto t = terms.upper_bound(d); t != terms.end(); ++t) {
            if (t->second != 0) parse_error(text, "degree exceeds " + std::to_string(d));
        }
    }
    std::vector<u64> coeffs(d, 0);
    for (const auto& [power, value] : terms) {
        if (power < d) coeffs[power] = value;
    }
    return MonicPoly(std::move(coeffs), m);
}

}  // namespace legrecon
