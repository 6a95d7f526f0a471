#include <algorithm>
#include <cstdlib>
#include <functional>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "checks.hpp"
#include "kudla/family.hpp"
#include "kudla/lift.hpp"
#include "kudla/textio.hpp"

using namespace kudla;
namespace fs = std::filesystem;

namespace {

enum Exit { kPass = 0, kCheckFail = 1, kUsage = 2, kPrecision = 3 };

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

fs::path cache_root() {
    const char* env = std::getenv("KUDLA_CACHE");
    return env && *env ? fs::path(env) : fs::path(".kudla-cache");
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Usage("cannot read " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& p, const std::string& s) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    fs::path tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        out << s;
        if (!out) throw std::runtime_error("cannot write " + p.string());
    }
    fs::rename(tmp, p);
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty())
        std::cout << text;
    else
        write_file(out, text);
}

Field field_arg(long d) {
    try {
        return Field::make(d);
    } catch (const std::invalid_argument& e) {
        throw Usage(std::string("-d: ") + e.what());
    }
}

void require_split(const Field& F, long p) {
    if (p < 3 || !is_prime(p)) throw Usage("p must be an odd prime");
    if (prime_split(F, p).kind != Split::split)
        throw Usage("p = " + std::to_string(p) + " does not split in Q(sqrt " + std::to_string(F.d) + ")");
}

// ---- field / classgroup

int cmd_field(long d, const std::string& out) {
    Field F = field_arg(d);
    TextDoc doc;
    doc.set("d", std::to_string(F.d));
    doc.set("D", std::to_string(F.D));
    doc.set("tau", "x^2 - " + std::to_string(F.t) + "x + " + std::to_string(F.n));
    doc.set("units", std::to_string(F.w));
    doc.set("h", std::to_string(class_group(F).size()));
    emit(write_doc(doc), out);
    return kPass;
}

int cmd_classgroup(long d, long m, const std::string& out) {
    Field F = field_arg(d);
    if (m < 1) throw Usage("-m must be positive");
    ClassGroup G = class_group(F, m);
    TextDoc doc;
    doc.set("d", std::to_string(F.d));
    doc.set("D", std::to_string(F.D));
    doc.set("modulus", std::to_string(m));
    doc.set("h", std::to_string(G.size()));
    doc.set("identity", std::to_string(G.identity));
    for (int i = 0; i < G.size(); ++i) {
        const auto& f = G.forms[i];
        std::string row;
        for (int j = 0; j < G.size(); ++j) row += (j ? "," : "") + std::to_string(G.table[i][j]);
        doc.records.emplace_back(std::to_string(i), "form " + std::to_string(f.a) + " " + std::to_string(f.b) + " " +
                                                        std::to_string(f.c) + " ideal " + G.reps[i].str() +
                                                        " row " + row);
    }
    emit(write_doc(doc), out);
    return kPass;
}

// ---- eigenform

int cmd_eigenform(long d, long m, long prec, long p, long N, const std::string& out) {
    Field F = field_arg(d);
    if (prec < 1) throw Usage("-N must be positive");
    HeckeChar psi;
    try {
        psi = cm_char(F, m);
    } catch (const std::exception& e) {
        throw Usage(std::string("-m: ") + e.what());
    }
    CMForm f = theta_cm(psi, std::max(prec, p));
    TextDoc doc;
    doc.set("d", std::to_string(F.d));
    doc.set("weight", std::to_string(f.q.weight));
    doc.set("level", std::to_string(f.q.level));
    doc.set("prec", std::to_string(prec));
    if (p == 0) {
        doc.set("coefficients", "x y in the basis 1, tau");
        for (long n = 0; n <= prec; ++n)
            if (!f.q.c[n].is_zero()) doc.records.emplace_back(std::to_string(n), kelem_text(f.q.c[n]));
    } else {
        require_split(F, p);
        auto ps = p_stabilize(f, PadicEmbedding::make(F, p, N));
        doc.set("p", std::to_string(p));
        doc.set("alpha", zp_text(ps.alpha));
        doc.set("beta", zp_text(ps.beta));
        doc.set("coefficients", "ordinary p-stabilization");
        for (long n = 0; n <= prec; ++n)
            if (!ps.q.c[n].is_zero()) doc.records.emplace_back(std::to_string(n), zp_text(ps.q.c[n]));
    }
    emit(write_doc(doc), out);
    return kPass;
}

// ---- lift

struct JobConfig {
    long d = -7, p = 11, r = 1, k = 6, nmax = 10, M = 4, bits = 256, qprec = 400;
    long cm = -1;  // CM input character cm_char(F, cm); defaults to k - 2
    std::string out;

    std::string canonical() const {
        std::ostringstream os;
        os << "format=kudla-fj-1;d=" << d << ";p=" << p << ";r=" << r << ";k=" << k << ";cm=" << cm
           << ";nmax=" << nmax << ";M=" << M << ";bits=" << bits << ";qprec=" << qprec;
        return os.str();
    }
};

void load_config(JobConfig& c, const std::string& path) {
    TextDoc doc = read_doc(read_file(path));
    const std::map<std::string, long*> keys = {{"d", &c.d},     {"p", &c.p},         {"r", &c.r},
                                               {"k", &c.k},     {"nmax", &c.nmax},   {"M", &c.M},
                                               {"bits", &c.bits}, {"qprec", &c.qprec}, {"cm", &c.cm}};
    for (const auto& [key, val] : doc.headers) {
        if (key == "out") {
            c.out = val;
            continue;
        }
        auto it = keys.find(key);
        if (it == keys.end()) throw Usage("unknown config key '" + key + "'");
        try {
            *it->second = std::stol(val);
        } catch (const std::exception&) {
            throw Usage("config key '" + key + "' needs an integer");
        }
    }
}

void validate(const JobConfig& c, const Field& F) {
    require_split(F, c.p);
    if (c.k < 6 || c.k % 2 != 0) throw Usage("k must be even and at least 6");
    if (c.r < 1) throw Usage("r must be positive");
    if (c.nmax < 0 || c.M < 0) throw Usage("nmax and M must be non-negative");
    if (c.bits < 64) throw Usage("bits must be at least 64");
}

std::string body_text(const TextDoc& d) {
    TextDoc b;
    b.records = d.records;
    return write_doc(b);
}

TextDoc compute_lift(const JobConfig& c, std::vector<std::string>& trace) {
    Field F = field_arg(c.d);
    PrecGuard pg(c.bits);
    long q = c.qprec;
    for (int attempt = 0;; ++attempt) {
        try {
            LiftData L{F, theta_cm(cm_char(F, c.cm), q).q, c.k, c.p, c.r, trivial_char(F),
                       unramified_weight_char(F, c.k), 0};
            FJExpansion E = fj_table(L, c.nmax, c.M);
            TextDoc doc;
            doc.set("format", "kudla-fj-1");
            doc.set("d", std::to_string(c.d));
            doc.set("D", std::to_string(F.D));
            doc.set("p", std::to_string(c.p));
            doc.set("r", std::to_string(c.r));
            doc.set("k", std::to_string(c.k));
            doc.set("cm", std::to_string(c.cm));
            doc.set("nmax", std::to_string(c.nmax));
            doc.set("M", std::to_string(c.M));
            doc.set("bits", std::to_string(c.bits));
            doc.set("qprec", std::to_string(q));
            doc.set("coefficients", std::to_string(E.table.size()));
            doc.set("record", "class,n,m -> coefficient of w^m, re ; im");
            double worst = 0;
            for (const auto& [key, fc] : E.table)
                for (size_t m = 0; m < fc.taylor.size(); ++m) {
                    worst = std::max(worst, fc.taylor[m].rad());
                    doc.records.emplace_back(
                        std::to_string(key.first) + "," + std::to_string(key.second) + "," + std::to_string(m),
                        cball_text(fc.taylor[m]));
                }
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3e", worst);
            doc.set("max_radius", buf);
            return doc;
        } catch (const PrecisionError& e) {
            trace.push_back("qprec " + std::to_string(q) + ": " + e.what());
            if (attempt >= 3) throw;
        } catch (const TailError& e) {
            trace.push_back("qprec " + std::to_string(q) + ": " + e.what());
            if (attempt >= 3) throw;
        }
        q *= 2;
    }
}

int cmd_lift(JobConfig c, bool use_cache) {
    Field F = field_arg(c.d);
    if (c.cm < 0) c.cm = c.k - 2;
    validate(c, F);
    std::string digest = sha256_hex(c.canonical());
    fs::path cached = cache_root() / (digest + ".fj");
    std::string text;
    if (use_cache && fs::exists(cached)) {
        try {
            TextDoc doc = read_doc(read_file(cached));
            if (doc.header("config_digest") == digest && doc.header("body_digest") == sha256_hex(body_text(doc)))
                text = write_doc(doc);
            else
                std::cerr << "cache: stale entry " << cached << ", recomputing\n";
        } catch (const std::exception& e) {
            std::cerr << "cache: unreadable entry (" << e.what() << "), recomputing\n";
        }
    }
    if (text.empty()) {
        std::vector<std::string> trace;
        TextDoc doc;
        try {
            doc = compute_lift(c, trace);
        } catch (...) {
            for (const auto& t : trace) std::cerr << "retry: " << t << "\n";
            throw;
        }
        for (const auto& t : trace) std::cerr << "retry: " << t << "\n";
        doc.set("config_digest", digest);
        doc.set("body_digest", sha256_hex(body_text(doc)));
        text = write_doc(doc);
        if (use_cache) write_file(cached, text);
    }
    emit(text, c.out);
    return kPass;
}

// ---- interpolate

int cmd_interpolate(long d, long p, long k, long j, long nmax, long M, long N, long MT, long J, bool wrong_branch,
                    const std::string& out) {
    Field F = field_arg(d);
    require_split(F, p);
    if (k < 6 || k % 2 != 0) throw Usage("k must be even and at least 6");
    if (j % 2 != 0) throw Usage("j must be even");
    if (M >= p) throw Usage("M must be below p");
    auto Fm = cm_hida_family(F, k - 2, p, N, MT, std::max(nmax * J, p));
    auto Xi = xi_family(unramified_weight_char(F, k), p, N, MT);
    auto L = lambda_fj(Fm, Xi, j, 1, nmax, M, J, wrong_branch ? -1 : 1);
    TextDoc doc;
    doc.set("format", "kudla-lambda-fj-1");
    doc.set("d", std::to_string(d));
    doc.set("p", std::to_string(p));
    doc.set("j", std::to_string(j));
    doc.set("N", std::to_string(N));
    doc.set("MT", std::to_string(MT));
    doc.set("record", "n,b,factor[,m,i] -> coefficients of T^0 .. T^{MT-1}, separated by ' | '");
    auto series = [](const LambdaElem& x) {
        std::string s;
        for (size_t i = 0; i < x.c.size(); ++i) s += (i ? " | " : "") + zp_text(x.c[i]);
        return s;
    };
    for (const auto& e : L.entries) {
        std::string key = std::to_string(e.n) + "," + std::to_string(e.b_index);
        doc.records.emplace_back(key + ",a", series(e.char_factor));
        doc.records.emplace_back(key + ",b", series(e.weight_factor));
        for (size_t m = 0; m < e.hecke.size(); ++m)
            for (size_t i = 0; i < e.hecke[m].size(); ++i)
                doc.records.emplace_back(key + ",c," + std::to_string(m) + "," + std::to_string(i),
                                         series(e.hecke[m][i]));
    }
    bool ok = true;
    for (long kk : {k, k + 2 * (p - 1)}) {
        auto c = specialize_fj(L, kk, N);
        ok = ok && c.ok();
        std::string v = std::string(c.ok() ? "pass" : "fail") + " compared " + std::to_string(c.compared) +
                        " precision " + std::to_string(c.precision);
        if (!c.ok()) v += " first failing factor " + std::string(1, c.first_failing_factor());
        doc.set("certificate.k" + std::to_string(kk), v);
    }
    emit(write_doc(doc), out);
    return ok ? kPass : kCheckFail;
}

// ---- verify

int cmd_verify(const std::string& suite, long d, long p, long k, const std::string& logdir) {
    static const std::vector<std::string> suites = {"theta", "eigen",  "euler",        "multiplicity",
                                                    "cosets", "xi",    "main-theorem", "all"};
    if (std::find(suites.begin(), suites.end(), suite) == suites.end()) throw Usage("unknown suite '" + suite + "'");
    auto want = [&](const char* s) { return suite == "all" || suite == s; };
    std::vector<checks::Result> res;
    if (want("theta")) {
        res.push_back(checks::class_group());
        res.push_back(checks::theta_fe());
        if (d != 0 || p != 0) {
            Field F = field_arg(d ? d : -7);
            require_split(F, p ? p : 11);
        }
        res.push_back(checks::shimura(d ? d : -7, p ? p : 11, k ? k : 6));
    }
    if (want("eigen")) res.push_back(checks::never_ordinary());
    if (want("euler")) res.push_back(checks::euler());
    if (want("multiplicity")) {
        if (p != 0 && (p < 3 || !is_prime(p))) throw Usage("p must be an odd prime");
        res.push_back(p ? checks::multiplicity({p}) : checks::multiplicity());
    }
    if (want("cosets")) res.push_back(checks::cosets());
    if (want("xi") || want("main-theorem")) {
        std::vector<std::pair<long, long>> fields = {{-7, 11}, {-11, 5}};
        if (d != 0 || p != 0) {
            if (d == 0 || p == 0) throw Usage("-d and -p go together");
            require_split(field_arg(d), p);
            fields = {{d, p}};
        }
        if (want("xi")) res.push_back(checks::xi(fields));
        if (want("main-theorem")) {
            checks::MainParams P;
            P.fields = fields;
            if (k) {
                if (k < 6 || k % 2 != 0) throw Usage("k must be even and at least 6");
                P.k = k;
            }
            res.push_back(checks::main_theorem(P));
            res.push_back(d ? checks::serre(d, p) : checks::serre());
        }
    }
    bool all = true;
    std::string summary;
    for (const auto& r : res) {
        all = all && r.pass;
        std::string line = std::string(r.pass ? "PASS" : "FAIL") + "  " + r.name + ": " + r.detail;
        std::cout << line << "\n";
        summary += line + "\n";
        if (!logdir.empty()) {
            std::string body = line + "\n";
            for (const auto& l : r.log) body += l + "\n";
            std::string file = r.name;
            std::replace(file.begin(), file.end(), ' ', '_');
            write_file(fs::path(logdir) / (file + ".log"), body);
        }
    }
    if (!logdir.empty()) write_file(fs::path(logdir) / "summary.txt", summary);
    return all ? kPass : kCheckFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-modified lifts to Picard modular forms and their Lambda-adic interpolation"};
    app.require_subcommand(1);

    long d = 0, m = 1, p = 0, k = 0, j = 0, prec = 30, N = 30, MT = 30, nmax = 10, M = 4, J = 3;
    std::string out, config, suite, logdir;
    bool no_cache = false, wrong_branch = false;
    JobConfig job;

    auto* field = app.add_subcommand("field", "field data for Q(sqrt d)");
    field->add_option("-d", d, "negative squarefree d")->required();
    field->add_option("-o,--out", out);

    auto* cg = app.add_subcommand("classgroup", "class group, representatives and multiplication table");
    cg->add_option("-d", d, "negative squarefree d")->required();
    cg->add_option("-m", m, "representatives coprime to m");
    cg->add_option("-o,--out", out);

    auto* eig = app.add_subcommand("eigenform", "q-expansion of the CM form of cm_char(F, m)");
    eig->add_option("-d", d)->required();
    eig->add_option("-m", m, "infinity type (m, 0)")->required();
    eig->add_option("-N,--prec", prec, "number of coefficients");
    eig->add_option("-p", p, "print the ordinary p-stabilization instead");
    eig->add_option("--digits", N, "p-adic precision");
    eig->add_option("-o,--out", out);

    auto* lift = app.add_subcommand("lift", "Fourier-Jacobi table of the p-modified lift");
    lift->add_option("-c,--config", config, "key = value job file");
    // flags override the file
    std::vector<std::pair<CLI::Option*, std::function<void(JobConfig&)>>> overrides;
    auto over = [&](const char* flag, long JobConfig::*field) {
        overrides.emplace_back(lift->add_option(flag, job.*field), [&job, field](JobConfig& c) { c.*field = job.*field; });
    };
    over("-d", &JobConfig::d);
    over("-p", &JobConfig::p);
    over("-r", &JobConfig::r);
    over("-k", &JobConfig::k);
    over("--nmax", &JobConfig::nmax);
    over("-M", &JobConfig::M);
    over("--bits", &JobConfig::bits);
    over("--qprec", &JobConfig::qprec);
    over("--cm", &JobConfig::cm);
    overrides.emplace_back(lift->add_option("-o,--out", job.out), [&job](JobConfig& c) { c.out = job.out; });
    lift->add_flag("--no-cache", no_cache);

    auto* interp = app.add_subcommand("interpolate", "Lambda-adic Fourier-Jacobi coefficients and their specializations");
    interp->add_option("-d", d)->required();
    interp->add_option("-p", p)->required();
    interp->add_option("-k", k, "base weight")->default_val(6);
    interp->add_option("-j", j)->default_val(0);
    interp->add_option("--nmax", nmax);
    interp->add_option("-M", M);
    interp->add_option("-N,--digits", N);
    interp->add_option("--MT", MT);
    interp->add_option("-J", J, "q-coefficients per slice");
    interp->add_flag("--wrong-branch", wrong_branch, "negative control: other square root in the weight factor");
    interp->add_option("-o,--out", out);

    auto* ver = app.add_subcommand("verify", "run a check suite");
    ver->add_option("suite", suite, "theta, eigen, euler, multiplicity, cosets, xi, main-theorem, all")->required();
    ver->add_option("-d", d);
    ver->add_option("-p", p);
    ver->add_option("-k", k);
    ver->add_option("--logs", logdir, "directory for per-check logs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*field) return cmd_field(d, out);
        if (*cg) return cmd_classgroup(d, m, out);
        if (*eig) return cmd_eigenform(d, m, prec, p, N, out);
        if (*lift) {
            JobConfig c;
            if (!config.empty()) load_config(c, config);
            for (auto& [opt, apply] : overrides)
                if (opt->count() > 0) apply(c);
            return cmd_lift(c, !no_cache);
        }
        if (*interp) return cmd_interpolate(d, p, k, j, nmax, M, N, MT, J, wrong_branch, out);
        if (*ver) {
            if (logdir.empty()) logdir = (cache_root() / "logs").string();
            return cmd_verify(suite, d, p, k, logdir);
        }
    } catch (const Usage& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const PrecisionError& e) {
        std::cerr << "precision failure: " << e.what() << " (required " << e.required << ")\n";
        return kPrecision;
    } catch (const TailError& e) {
        std::cerr << "precision failure: " << e.what() << "\n";
        return kPrecision;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCheckFail;
    }
    return kUsage;
}
