// qjd: command-line front end for the quasi-Jordan identity library.

#include "qjd/qjd.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

using json = nlohmann::ordered_json;

enum ExitCode { kOk = 0, kVerifyFailed = 1, kUsage = 2, kResource = 3 };

struct RunConfig {
    std::uint32_t prime = 101;
    unsigned threads = 1;
    std::string format = "text";
    bool allow_large = false;
};

unsigned default_threads()
{
    if (const char* env = std::getenv("QJD_THREADS")) {
        try {
            int v = std::stoi(env);
            if (v > 0)
                return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
        throw qjd::ConfigError(std::string("QJD_THREADS must be a positive integer, got '") + env + "'");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// A table of cells emitted as aligned text, TSV, or a JSON array of objects.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;

    static std::string cell(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

    void emit(std::ostream& out, const std::string& format) const
    {
        if (format == "json") {
            json arr = json::array();
            for (const auto& r : rows) {
                json obj = json::object();
                for (std::size_t i = 0; i < columns.size(); ++i)
                    obj[columns[i]] = r[i];
                arr.push_back(std::move(obj));
            }
            out << arr.dump(2) << '\n';
            return;
        }
        if (format == "tsv") {
            for (std::size_t i = 0; i < columns.size(); ++i)
                out << (i ? "\t" : "") << columns[i];
            out << '\n';
            for (const auto& r : rows) {
                for (std::size_t i = 0; i < r.size(); ++i)
                    out << (i ? "\t" : "") << cell(r[i]);
                out << '\n';
            }
            return;
        }
        std::vector<std::size_t> width(columns.size());
        for (std::size_t i = 0; i < columns.size(); ++i)
            width[i] = columns[i].size();
        for (const auto& r : rows)
            for (std::size_t i = 0; i < r.size(); ++i)
                width[i] = std::max(width[i], cell(r[i]).size());
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i)
                    out << "  ";
                out << std::setw(static_cast<int>(width[i])) << cells[i];
            }
            out << '\n';
        };
        line(columns);
        for (const auto& r : rows) {
            std::vector<std::string> cells;
            for (const auto& v : r)
                cells.push_back(cell(v));
            line(cells);
        }
    }
};

qjd::ProgressFn stderr_progress()
{
    auto start = std::chrono::steady_clock::now();
    return [start](const std::string& msg) {
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cerr << "[" << std::fixed << std::setprecision(1) << s << "s] " << msg << std::endl;
    };
}

qjd::ChainOptions chain_options(const RunConfig& cfg)
{
    qjd::ChainOptions opt;
    opt.p = cfg.prime;
    opt.threads = cfg.threads;
    opt.progress = stderr_progress();
    return opt;
}

void check_prime(const RunConfig& cfg, std::size_t degree)
{
    qjd::checked_prime(cfg.prime);
    if (cfg.prime <= degree)
        throw qjd::ConfigError("prime " + std::to_string(cfg.prime) + " must exceed the degree " +
                               std::to_string(degree));
}

void emit_identity(std::ostream& out, const qjd::Polynomial& p, const std::vector<std::string>& header,
                   const std::string& format)
{
    if (format == "json") {
        json terms = json::array();
        for (const auto& [m, c] : p)
            terms.push_back({{"coefficient", c}, {"monomial", qjd::to_string(m)}});
        json meta = json::array();
        for (const auto& h : header)
            meta.push_back(h);
        out << json{{"comments", meta}, {"terms", terms}}.dump(2) << '\n';
        return;
    }
    for (const auto& h : header)
        out << "# " << h << '\n';
    out << qjd::format_identity(p);
}

// ---------------------------------------------------------------------------

int cmd_types(const RunConfig& cfg, std::size_t n, const std::string& kind)
{
    qjd::check_degree_guard(n, cfg.allow_large);
    Table t;
    if (kind == "comm") {
        t.columns = {"index", "type"};
        for (const auto& ty : qjd::comm_types(n))
            t.rows.push_back({ty.index + 1, qjd::to_string(ty.basic())});
    } else {
        t.columns = {"index", "type", "symmetries", "monomials"};
        for (const auto& ty : qjd::rc_types(n))
            t.rows.push_back({ty.index + 1, qjd::to_string(ty.basic()), ty.symmetries.size(),
                              qjd::factorial(n) >> ty.symmetries.size()});
    }
    t.emit(std::cout, cfg.format);
    return kOk;
}

int cmd_dims(const RunConfig& cfg, std::size_t max_degree)
{
    if (max_degree < 1 || max_degree > 12)
        throw qjd::DomainError("--max-degree must lie in 1..12");
    Table t;
    t.columns = {"n", "C", "R", "K", "dim_frc", "conjecture"};
    for (std::size_t n = 1; n <= max_degree; ++n) {
        auto c = qjd::count_types(n);
        t.rows.push_back({n, c.comm, c.rc, c.all, qjd::frc_dim(n), qjd::frc_dim_conjecture(n)});
    }
    t.emit(std::cout, cfg.format);
    return kOk;
}

int cmd_expand(const RunConfig& cfg, const std::string& monomial, const std::string& file, bool exact)
{
    qjd::Polynomial p;
    if (!monomial.empty())
        p.add(qjd::parse_monomial(monomial), 1);
    else
        p = qjd::read_identity_file(file);
    qjd::checked_prime(cfg.prime);
    qjd::DiPolynomial e = exact ? qjd::expand_poly(p, cfg.allow_large) : qjd::expand_poly_mod(p, cfg.prime, cfg.allow_large);
    Table t;
    t.columns = {"coefficient", "monomial"};
    for (const auto& [m, c] : e)
        t.rows.push_back({c, qjd::to_string(m)});
    if (cfg.format != "json")
        std::cout << "# expansion: " << (e.empty() ? "zero" : std::to_string(e.size()) + " terms") << '\n';
    if (!e.empty() || cfg.format == "json")
        t.emit(std::cout, cfg.format);
    return kOk;
}

Table partition_table(const std::vector<qjd::PartitionRanks>& rs)
{
    Table t;
    t.columns = {"lambda", "d", "old_rows", "old_cols", "old_rank", "all_rows", "all_cols", "all_rank", "new"};
    for (const auto& r : rs)
        t.rows.push_back({qjd::to_string(r.lambda), r.d, r.old_rows, r.old_cols, r.old_rank, r.all_rows, r.all_cols,
                          r.all_rank, r.new_count()});
    return t;
}

std::vector<qjd::Partition> parse_filter(const std::vector<std::string>& texts)
{
    std::vector<qjd::Partition> out;
    for (const auto& s : texts)
        out.push_back(qjd::parse_partition(s));
    return out;
}

int cmd_table(const RunConfig& cfg, std::size_t n, const std::vector<std::string>& filter)
{
    check_prime(cfg, n);
    auto rs = qjd::rank_table(n, chain_options(cfg), parse_filter(filter));
    partition_table(rs).emit(std::cout, cfg.format);
    return kOk;
}

int cmd_ranks(const RunConfig& cfg, std::size_t n, const std::string& method, const std::vector<std::string>& filter)
{
    check_prime(cfg, n);
    if (method == "repn")
        return cmd_table(cfg, n, filter);
    if (!filter.empty())
        throw qjd::ConfigError("--partition applies to the repn method only");
    auto progress = stderr_progress();
    auto report = qjd::old_rank_direct(n, cfg.prime, [&](std::size_t g, std::size_t r) {
        if (g % 10 == 0)
            progress("generator " + std::to_string(g) + ": rank " + std::to_string(r));
    });
    const std::size_t all = qjd::all_rank_direct(n, cfg.prime);
    if (cfg.format == "json") {
        json j{{"degree", n},
               {"generators", report.generators.size()},
               {"trace", report.trace},
               {"retained", report.retained},
               {"old_rank", report.final_rank},
               {"all_rank", all},
               {"new", all - report.final_rank}};
        std::cout << j.dump(2) << '\n';
        return kOk;
    }
    Table t;
    t.columns = {"index", "generator", "rank", "retained"};
    for (std::size_t i = 0; i < report.trace.size(); ++i) {
        bool kept = std::find(report.retained.begin(), report.retained.end(), i + 1) != report.retained.end();
        t.rows.push_back({i + 1, report.generators[i].label, report.trace[i], kept ? "yes" : "no"});
    }
    t.emit(std::cout, cfg.format);
    std::cout << "# old rank: " << report.final_rank << '\n'
              << "# all rank: " << all << '\n'
              << "# new: " << all - report.final_rank << '\n';
    return kOk;
}

int cmd_glennie(const RunConfig& cfg, const std::string& var, bool verify, const std::string& output)
{
    if (var.size() != 1)
        throw qjd::DomainError("--var takes one letter");
    qjd::Polynomial k = qjd::glennie_preimage(var[0]);
    std::vector<std::string> header{"Glennie preimage linearized in " + var + ": " + std::to_string(k.size()) +
                                    " terms"};
    bool ok = true;
    if (verify) {
        ok = qjd::verify_preimage(k);
        header.push_back(std::string("expansion: ") + (ok ? "zero" : "nonzero"));
    }
    if (!output.empty()) {
        std::ofstream f(output);
        if (!f)
            throw qjd::ConfigError("cannot write '" + output + "'");
        emit_identity(f, k, header, cfg.format);
    } else {
        emit_identity(std::cout, k, header, cfg.format);
    }
    return ok ? kOk : kVerifyFailed;
}

int cmd_find_special(const RunConfig& cfg, const std::string& content, const std::string& output)
{
    check_prime(cfg, content.size());
    auto result = qjd::find_special_identity(content, chain_options(cfg), cfg.allow_large);
    if (!result) {
        if (cfg.format == "json")
            std::cout << json{{"content", content}, {"found", false}}.dump(2) << '\n';
        else
            std::cout << "# content " << content << ": no identity outside the lifted identities\n";
        return kOk;
    }
    const auto& r = result->report;
    std::vector<std::string> header{
        "content " + r.content,
        "basis " + std::to_string(r.basis_size) + ", dialgebra basis " + std::to_string(r.di_basis_size),
        "lifted generators " + std::to_string(r.generators) + " x " + std::to_string(r.substitutions) +
            " substitutions: rank " + std::to_string(r.lifted_rank),
        "expansion rank " + std::to_string(r.expansion_rank) + ", nullity " + std::to_string(r.nullity),
        "candidate " + std::to_string(r.candidates_tested) + " with " + std::to_string(r.distinct_coefficients) +
            " distinct coefficients",
        std::to_string(result->identity.size()) + " terms"};
    if (!output.empty()) {
        std::ofstream f(output);
        if (!f)
            throw qjd::ConfigError("cannot write '" + output + "'");
        emit_identity(f, result->identity, header, cfg.format);
    } else {
        emit_identity(std::cout, result->identity, header, cfg.format);
    }
    return kOk;
}

int cmd_verify(const RunConfig& cfg, const std::string& file)
{
    qjd::Polynomial p = qjd::read_identity_file(file);
    const std::string content = qjd::content_of(p);
    check_prime(cfg, content.size());
    auto v = qjd::verify_special(p, chain_options(cfg), cfg.allow_large);
    if (cfg.format == "json") {
        std::cout << json{{"terms", p.size()},
                          {"expansion_zero", v.expansion_zero},
                          {"rank_increase", v.rank_increase},
                          {"commutative_terms", v.commutative_terms}}
                         .dump(2)
                  << '\n';
    } else {
        Table t;
        t.columns = {"terms", "expansion_zero", "rank_increase", "commutative_terms"};
        t.rows.push_back({p.size(), v.expansion_zero ? "true" : "false", v.rank_increase, v.commutative_terms});
        t.emit(std::cout, cfg.format);
    }
    return v.expansion_zero ? kOk : kVerifyFailed;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Polynomial identities of the quasi-Jordan product in associative dialgebras"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    std::optional<unsigned> threads;
    app.add_option("-p,--prime", cfg.prime, "prime modulus (default 101)");
    app.add_option("-t,--threads", threads, "worker threads (default: QJD_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    app.add_option("-f,--format", cfg.format, "output format")->check(CLI::IsMember({"text", "tsv", "json"}));
    app.add_flag("--allow-large", cfg.allow_large, "lift the degree and memory guards");

    std::size_t degree = 0, max_degree = 12;
    std::string kind = "rc", monomial, file, method = "repn", var, content, output;
    std::vector<std::string> filter;
    bool exact = false, verify = false;

    auto* types = app.add_subcommand("types", "list association types");
    types->add_option("-n,--degree", degree)->required();
    types->add_option("--kind", kind)->check(CLI::IsMember({"comm", "rc"}));

    auto* dims = app.add_subcommand("dims", "type counts and dimensions of the free right-commutative algebra");
    dims->add_option("--max-degree", max_degree);

    auto* expand = app.add_subcommand("expand", "quasi-Jordan expansion into the free dialgebra");
    auto* mono_opt = expand->add_option("-m,--monomial", monomial);
    auto* file_opt = expand->add_option("-i,--identity", file)->check(CLI::ExistingFile);
    mono_opt->excludes(file_opt);
    expand->add_flag("--exact", exact, "integer coefficients instead of residues");

    auto* ranks = app.add_subcommand("ranks", "old and all identity ranks");
    ranks->add_option("-n,--degree", degree)->required();
    ranks->add_option("--method", method)->check(CLI::IsMember({"direct", "repn"}));
    ranks->add_option("--partition", filter, "restrict to partitions, e.g. 431");

    auto* table = app.add_subcommand("table", "per-partition rank table");
    table->add_option("-n,--degree", degree)->required();
    table->add_option("--partition", filter, "restrict to partitions, e.g. 431");

    auto* glennie = app.add_subcommand("glennie", "noncommutative preimage of the Glennie identity");
    glennie->add_option("--var", var)->required()->check(CLI::IsMember({"a", "b", "c"}));
    glennie->add_flag("--verify", verify, "check that the expansion vanishes");
    glennie->add_option("-o,--output", output);

    auto* special = app.add_subcommand("find-special", "search for a new identity of a given content");
    special->add_option("--content", content)->required();
    special->add_option("-o,--output", output);

    auto* ver = app.add_subcommand("verify", "check an identity file");
    ver->add_option("-i,--identity", file)->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        cfg.threads = threads ? *threads : default_threads();
        if (*types)
            return cmd_types(cfg, degree, kind);
        if (*dims)
            return cmd_dims(cfg, max_degree);
        if (*expand) {
            if (monomial.empty() && file.empty())
                throw qjd::ConfigError("expand needs --monomial or --identity");
            return cmd_expand(cfg, monomial, file, exact);
        }
        if (*ranks)
            return cmd_ranks(cfg, degree, method, filter);
        if (*table)
            return cmd_table(cfg, degree, filter);
        if (*glennie)
            return cmd_glennie(cfg, var, verify, output);
        if (*special)
            return cmd_find_special(cfg, content, output);
        if (*ver)
            return cmd_verify(cfg, file);
    } catch (const qjd::ResourceError& e) {
        std::cerr << "qjd: " << e.what() << '\n';
        return kResource;
    } catch (const qjd::Error& e) {
        std::cerr << "qjd: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
