#pragma once

// The acceptance criteria as runnable checks, shared by `kudla verify` and the acceptance binary.

#include <string>
#include <utility>
#include <vector>

namespace kudla::checks {

struct Result {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
    double budget = 0;  // seconds; exceeding it fails the check
    std::vector<std::string> log;
};

Result class_group(long d_low = -200);
Result theta_fe(const std::vector<long>& discs = {-3, -4, -7}, int triples = 25, double tol = 1e-20);
Result shimura(long d = -7, long p = 11, long k = 6, long nmax = 3, int translates = 10, double tol = 1e-15);
Result multiplicity(const std::vector<long>& primes = {5, 13});
Result cosets(const std::vector<std::pair<long, long>>& levels = {{5, -3}, {3, -4}, {2, -7}, {5, -7}},
              const std::vector<long>& ns = {1, 2, 3, 5});
Result euler(const std::vector<long>& ks = {6, 8, 10});
Result never_ordinary(const std::vector<long>& ks = {6, 8, 10});
Result xi(const std::vector<std::pair<long, long>>& fields = {{-11, 5}, {-7, 11}}, long mmax = 5);

struct MainParams {
    std::vector<std::pair<long, long>> fields{{-7, 11}, {-11, 5}};  // (d, p)
    std::vector<long> js{0, 2};
    long k = 6;
    long nmax = 10, M = 4, N = 30, MT = 30, J = 3;
};
Result main_theorem(const MainParams& P = {});
Result serre(long d = -11, long p = 5, long mmax = 4);

}  // namespace kudla::checks
