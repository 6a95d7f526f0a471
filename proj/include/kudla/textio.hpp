#pragma once

// Line-oriented text records: "key = value" headers, a blank line, then "index<TAB>value" records.
// Rationals are num/den, p-adics u*p^e mod p^N, balls "mid ± rad" with hexadecimal significands.

#include <string>
#include <utility>
#include <vector>

#include "kudla/ball.hpp"
#include "kudla/imquad.hpp"
#include "kudla/padic.hpp"

namespace kudla {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string q_text(const Q& x);
Q parse_q(const std::string& s);

std::string zp_text(const Zp& x);
Zp parse_zp(const std::string& s);

std::string rball_text(const RBall& x);
RBall parse_rball(const std::string& s);
// real and imaginary balls separated by " ; "
std::string cball_text(const CBall& x);
CBall parse_cball(const std::string& s);

// coordinates in the basis 1, tau: "x y"
std::string kelem_text(const KElem& x);
KElem parse_kelem(const Field& F, const std::string& s);

struct TextDoc {
    std::vector<std::pair<std::string, std::string>> headers;
    std::vector<std::pair<std::string, std::string>> records;

    bool has(const std::string& key) const;
    const std::string& header(const std::string& key) const;
    void set(const std::string& key, const std::string& value);
};

std::string write_doc(const TextDoc& d);
TextDoc read_doc(const std::string& text);

std::string sha256_hex(const std::string& data);

}  // namespace kudla
