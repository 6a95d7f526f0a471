#include "kudla/laurent.hpp"

#include <sstream>
#include <stdexcept>

namespace kudla {

Laurent::Laurent(const Q& c) {
    if (sgn(c) != 0) t_[{}] = c;
}

Laurent Laurent::sym(const std::string& s, const Q& e) {
    Laurent r;
    Monomial m;
    Q ec = e;
    ec.canonicalize();
    if (sgn(ec) != 0) m[s] = ec;
    r.t_[m] = 1;
    return r;
}

void Laurent::add_term(const Monomial& m, const Q& c) {
    Monomial mm;
    for (const auto& [s, e] : m)
        if (sgn(e) != 0) mm[s] = e;
    auto it = t_.find(mm);
    if (it == t_.end()) {
        if (sgn(c) != 0) t_.emplace(mm, c);
        return;
    }
    it->second += c;
    if (sgn(it->second) == 0) t_.erase(it);
}

Laurent& Laurent::operator+=(const Laurent& o) {
    for (const auto& [m, c] : o.t_) add_term(m, c);
    return *this;
}

Laurent& Laurent::operator-=(const Laurent& o) {
    for (const auto& [m, c] : o.t_) add_term(m, -c);
    return *this;
}

Laurent& Laurent::operator*=(const Laurent& o) {
    Laurent r;
    for (const auto& [m1, c1] : t_)
        for (const auto& [m2, c2] : o.t_) {
            Monomial m = m1;
            for (const auto& [s, e] : m2) m[s] += e;
            r.add_term(m, c1 * c2);
        }
    *this = std::move(r);
    return *this;
}

Laurent Laurent::operator-() const {
    Laurent r;
    for (const auto& [m, c] : t_) r.t_[m] = -c;
    return r;
}

Laurent Laurent::pow(long e) const {
    if (e < 0) {
        if (t_.size() != 1) throw std::domain_error("negative power of a non-monomial");
        const auto& [m, c] = *t_.begin();
        Laurent r;
        Monomial mm;
        for (const auto& [s, x] : m) mm[s] = x * e;
        Q ci = 1 / c;
        Q cc = 1;
        for (long i = 0; i < -e; ++i) cc *= ci;
        r.t_[mm] = cc;
        return r;
    }
    Laurent r(1), b = *this;
    for (; e > 0; e >>= 1) {
        if (e & 1) r *= b;
        b *= b;
    }
    return r;
}

Laurent Laurent::reduce(const std::map<std::string, long>& orders) const {
    Laurent r;
    for (const auto& [m, c] : t_) {
        Monomial mm = m;
        for (auto& [s, e] : mm) {
            auto it = orders.find(s);
            if (it == orders.end()) continue;
            if (e.get_den() != 1) throw std::domain_error("fractional power of a torsion symbol");
            Z v = e.get_num() % it->second;
            if (v < 0) v += it->second;
            e = Q(v);
        }
        r.add_term(mm, c);
    }
    return r;
}

Laurent Laurent::coeff(const std::string& s, const Q& e) const {
    Laurent r;
    for (const auto& [m, c] : t_) {
        auto it = m.find(s);
        Q me = it == m.end() ? Q(0) : it->second;
        if (me != e) continue;
        Monomial mm = m;
        mm.erase(s);
        r.add_term(mm, c);
    }
    return r;
}

Q Laurent::max_exponent(const std::string& s) const {
    Q best = 0;
    bool first = true;
    for (const auto& [m, c] : t_) {
        auto it = m.find(s);
        Q me = it == m.end() ? Q(0) : it->second;
        if (first || me > best) best = me;
        first = false;
    }
    return best;
}

bool Laurent::divisible_by(const std::string& s, const Q& e, const std::vector<std::string>& integral) const {
    for (const auto& [m, c] : t_) {
        if (c.get_den() != 1) return false;
        auto it = m.find(s);
        Q me = it == m.end() ? Q(0) : it->second;
        if (me < e || Q(me - e).get_den() != 1) return false;
        for (const auto& name : integral) {
            auto jt = m.find(name);
            if (jt != m.end() && (jt->second < 0 || jt->second.get_den() != 1)) return false;
        }
    }
    return true;
}

std::string Laurent::str() const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : t_) {
        if (!first) os << " + ";
        first = false;
        os << c.get_str();
        for (const auto& [s, e] : m) os << "*" << s << "^" << e.get_str();
    }
    return os.str();
}

}  // namespace kudla
