#include "kudla/textio.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <sstream>

namespace kudla {

namespace {

const std::string kPm = " ± ";

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

Z parse_z(const std::string& s) {
    Z z;
    if (s.empty() || z.set_str(s, 10) != 0) throw ParseError("bad integer '" + s + "'");
    return z;
}

long parse_long(const std::string& s) {
    size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(s, &pos);
    } catch (const std::exception&) {
        throw ParseError("bad integer '" + s + "'");
    }
    if (pos != s.size()) throw ParseError("bad integer '" + s + "'");
    return v;
}

// "p^e"
std::pair<long, long> parse_power(const std::string& s) {
    size_t c = s.find('^');
    if (c == std::string::npos) throw ParseError("expected p^e in '" + s + "'");
    return {parse_long(s.substr(0, c)), parse_long(s.substr(c + 1))};
}

std::string mpfr_hex(const mpfr_t x) {
    char* s = nullptr;
    mpfr_asprintf(&s, "%Ra", x);
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

}  // namespace

std::string q_text(const Q& x0) {
    Q x = x0;
    x.canonicalize();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Q parse_q(const std::string& s0) {
    std::string s = trim(s0);
    size_t c = s.find('/');
    Q q;
    if (c == std::string::npos)
        q = Q(parse_z(s));
    else {
        Z den = parse_z(s.substr(c + 1));
        if (den == 0) throw ParseError("zero denominator");
        q = Q(parse_z(s.substr(0, c)), den);
    }
    q.canonicalize();
    return q;
}

std::string zp_text(const Zp& x) {
    std::ostringstream os;
    long e = x.valuation();
    if (e >= x.N)
        os << "0";
    else
        os << x.div_p(e).v.get_str() << "*" << x.p << "^" << e;
    os << " mod " << x.p << "^" << x.N;
    return os.str();
}

Zp parse_zp(const std::string& s0) {
    std::string s = trim(s0);
    size_t m = s.find(" mod ");
    if (m == std::string::npos) throw ParseError("missing ' mod ' in '" + s + "'");
    auto [p, N] = parse_power(trim(s.substr(m + 5)));
    if (p < 2 || N < 0) throw ParseError("bad modulus");
    std::string head = trim(s.substr(0, m));
    if (head == "0") return Zp(p, N, 0);
    size_t star = head.find('*');
    if (star == std::string::npos) throw ParseError("expected u*p^e in '" + head + "'");
    Z u = parse_z(head.substr(0, star));
    auto [p2, e] = parse_power(head.substr(star + 1));
    if (p2 != p || e < 0) throw ParseError("inconsistent prime");
    Z pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), p, e);
    return Zp(p, N, u * pe);
}

std::string rball_text(const RBall& x) { return mpfr_hex(x.m) + kPm + mpfr_hex(x.r); }

RBall parse_rball(const std::string& s0) {
    std::string s = trim(s0);
    size_t c = s.find(kPm);
    if (c == std::string::npos) throw ParseError("missing ± in '" + s + "'");
    std::string ms = s.substr(0, c), rs = s.substr(c + kPm.size());
    RBall b;
    char* end = nullptr;
    int inex = mpfr_strtofr(b.m, ms.c_str(), &end, 0, MPFR_RNDN);
    if (end == ms.c_str() || *end != '\0') throw ParseError("bad midpoint '" + ms + "'");
    mpfr_strtofr(b.r, rs.c_str(), &end, 0, MPFR_RNDU);
    if (end == rs.c_str() || *end != '\0' || mpfr_sgn(b.r) < 0) throw ParseError("bad radius '" + rs + "'");
    if (inex != 0) {
        // the text carried more bits than the working precision
        mpfr_t e;
        mpfr_init2(e, 64);
        mpfr_abs(e, b.m, MPFR_RNDU);
        mpfr_mul_2si(e, e, -(ball_prec() - 1), MPFR_RNDU);
        b.add_error(e);
        mpfr_clear(e);
    }
    return b;
}

std::string cball_text(const CBall& x) { return rball_text(x.re) + " ; " + rball_text(x.im); }

CBall parse_cball(const std::string& s) {
    size_t c = s.find(" ; ");
    if (c == std::string::npos) throw ParseError("missing ' ; ' in complex ball");
    return CBall(parse_rball(s.substr(0, c)), parse_rball(s.substr(c + 3)));
}

std::string kelem_text(const KElem& x) { return q_text(x.x) + " " + q_text(x.y); }

KElem parse_kelem(const Field& F, const std::string& s0) {
    std::string s = trim(s0);
    size_t c = s.find(' ');
    if (c == std::string::npos) throw ParseError("expected two coordinates");
    return KElem(F, parse_q(s.substr(0, c)), parse_q(s.substr(c + 1)));
}

bool TextDoc::has(const std::string& key) const {
    for (const auto& [k, v] : headers)
        if (k == key) return true;
    return false;
}

const std::string& TextDoc::header(const std::string& key) const {
    for (const auto& [k, v] : headers)
        if (k == key) return v;
    throw ParseError("missing header '" + key + "'");
}

void TextDoc::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : headers)
        if (k == key) {
            v = value;
            return;
        }
    headers.emplace_back(key, value);
}

std::string write_doc(const TextDoc& d) {
    std::string out;
    for (const auto& [k, v] : d.headers) {
        if (k.find('=') != std::string::npos || k.find('\n') != std::string::npos || v.find('\n') != std::string::npos)
            throw std::invalid_argument("header not representable: " + k);
        out += k + " = " + v + "\n";
    }
    out += "\n";
    for (const auto& [i, v] : d.records) {
        if (i.find('\t') != std::string::npos || v.find('\n') != std::string::npos)
            throw std::invalid_argument("record not representable: " + i);
        out += i + "\t" + v + "\n";
    }
    return out;
}

TextDoc read_doc(const std::string& text) {
    TextDoc d;
    std::istringstream is(text);
    std::string line;
    bool body = false;
    long lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!body) {
            if (trim(line).empty()) {
                body = true;
                continue;
            }
            if (line[0] == '#') continue;
            size_t c = line.find('=');
            if (c == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
            d.headers.emplace_back(trim(line.substr(0, c)), trim(line.substr(c + 1)));
        } else {
            if (line.empty()) continue;
            size_t c = line.find('\t');
            if (c == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": expected index<TAB>value");
            d.records.emplace_back(line.substr(0, c), line.substr(c + 1));
        }
    }
    return d;
}

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    std::string out;
    char buf[3];
    for (unsigned i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        out += buf;
    }
    return out;
}

}  // namespace kudla
