#include "intb/ode.hpp"
#include "intb/problem.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace intb;

namespace {

enum Exit { kOk = 0, kValidation = 1, kInternal = 2, kNumerical = 3 };

std::string tree(const FormalBracket& b, int indent = 0) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    if (b.is_leaf()) return pad + "X" + std::to_string(b.index()) + "\n";
    return pad + "[] degree " + std::to_string(b.degree()) + "\n" + tree(b.left(), indent + 1) +
           tree(b.right(), indent + 1);
}

FormalBracket unshift(const FormalBracket& b, int mu) {
    if (b.is_leaf()) return FormalBracket::leaf(b.index() - mu);
    return FormalBracket::node(unshift(b.left(), mu), unshift(b.right(), mu));
}

std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

int cmd_parse(const std::string& text) {
    const FormalBracket b = parse(text);
    std::cout << "bracket   " << render(b) << "\n";
    std::cout << "degree    " << b.degree() << "\n";
    std::cout << "letters   (" << join(b.letters()) << ")\n";
    const auto mu = b.semicanonical_shift();
    if (b.is_canonical()) {
        std::cout << "canonical yes\n";
    } else if (mu) {
        std::cout << "canonical no\nsemicanonical yes, mu=" << *mu << "\n";
    } else {
        std::cout << "canonical no\nsemicanonical no\n";
    }
    if (mu && b.degree() >= 2) {
        const auto f = canonical_factorization(unshift(b, *mu));
        std::cout << "factorization (" << render(f.left) << ", " << render(f.right) << "), m1=" << f.m1 << "\n";
    }
    std::cout << "ast\n" << tree(b);
    return kOk;
}

int cmd_regularity(const std::string& text, int k) {
    const FormalBracket b = parse(text);
    const auto mu = b.semicanonical_shift();
    if (!mu) throw BracketError("bracket " + render(b) + " is not semicanonical");
    const auto prof = regularity_profile(unshift(b, *mu), k);
    const auto letters = b.letters();
    std::cout << "bracket " << render(b) << "  k=" << k << "\n";
    std::cout << "slot  field  class\n";
    for (std::size_t i = 0; i < prof.orders.size(); ++i) {
        std::cout << i + 1 << "     X" << letters[i] << "     C^" << prof.orders[i] << "\n";
    }
    std::cout << "profile (" << join(prof.orders) << ")\n";
    std::cout << "N(B) " << num_exponential_factors(b) << "\n";
    return kOk;
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int cmd_run(const std::string& file, const std::string& command, const RunOptions& opts, const std::string& out_dir,
            const std::string& format) {
    const ProblemFile problem = load_problem_file(file);
    const auto start = std::chrono::steady_clock::now();
    const CommandOutput out = run_command(problem, command, opts);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string json = out.to_json(command).dump(2) + "\n";
    const std::string csv = out.to_csv();

    if (out_dir.empty()) {
        std::cout << (format == "csv" ? csv : json);
    } else {
        namespace fs = std::filesystem;
        fs::create_directories(out_dir);
        std::ofstream(fs::path(out_dir) / "report.json") << json;
        std::ofstream(fs::path(out_dir) / "report.csv") << csv;
        Json meta;
        meta["tool"] = "intb";
        meta["command"] = command;
        meta["problem_file"] = file;
        meta["started_utc"] = utc_now();
        meta["elapsed_seconds"] = elapsed;
        std::ofstream(fs::path(out_dir) / "metadata.json") << meta.dump(2) << "\n";
    }
    for (const auto& l : out.lines) std::cerr << l << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Iterated brackets, multiflows and integral representations"};
    app.require_subcommand(1);

    std::string text;
    int k = 0;
    auto* p = app.add_subcommand("parse", "Parse a bracket and print its structure");
    p->add_option("bracket", text, "bracket such as [[X1,X2],X3]")->required();

    auto* r = app.add_subcommand("regularity", "Per-slot regularity classes and N(B)");
    r->add_option("bracket", text)->required();
    r->add_option("--k", k, "extra smoothness offset")->check(CLI::NonNegativeNumber);

    std::string file, command, out_dir, format = "json";
    double ode_tol = 0, delta = 0;
    int quad_nodes = 0;
    auto* run = app.add_subcommand("run", "Run a command on a JSON problem file");
    run->add_option("problem", file)->required();
    run->add_option("command", command)->required()->check(CLI::IsMember(known_commands()));
    auto* o_tol = run->add_option("--ode-tol", ode_tol, "ODE absolute and relative tolerance");
    auto* o_nodes = run->add_option("--quad-nodes", quad_nodes, "Gauss-Legendre nodes per dimension");
    auto* o_delta = run->add_option("--delta", delta, "time box bound for verify-integral");
    run->add_option("--out", out_dir, "write report.json, report.csv and metadata.json here");
    run->add_option("--format", format, "stdout format")->check(CLI::IsMember({"json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (*p) return cmd_parse(text);
        if (*r) return cmd_regularity(text, k);
        RunOptions opts;
        if (*o_tol) opts.ode_tol = ode_tol;
        if (*o_nodes) opts.quad_nodes = quad_nodes;
        if (*o_delta) opts.delta = delta;
        return cmd_run(file, command, opts, out_dir, format);
    } catch (const IntegrationError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const ValidationError& e) {
        std::cerr << "invalid input at " << e.what() << "\n";
        return kValidation;
    } catch (const ParseError& e) {
        std::cerr << "syntax error: " << e.what() << "\n";
        return kValidation;
    } catch (const BracketError& e) {
        std::cerr << "invalid bracket: " << e.what() << "\n";
        return kValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}
