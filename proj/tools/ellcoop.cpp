// Command-line driver: one subcommand per report, JSON (or CSV for tor-table)
// written to stdout or to --output.

#include "ellcoop/report.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::vector<int> parse_indices(const std::string& text)
{
    std::vector<int> out;
    if (text.empty())
        return out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        const int v = std::stoi(item, &used);
        if (used != item.size())
            throw CLI::ValidationError("--indices", "not an integer: " + item);
        out.push_back(v);
    }
    return out;
}

std::filesystem::path resolve_output(const std::string& output)
{
    std::filesystem::path path(output);
    if (path.is_relative()) {
        if (const char* dir = std::getenv("ELLCOOP_OUTPUT_DIR"); dir && *dir)
            path = std::filesystem::path(dir) / path;
    }
    return path;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Koszul, Steenrod and rational-model computations for the cooperations of the Adams summand"};
    app.require_subcommand(1);

    ellcoop::RunOptions opts;
    std::string indices;
    std::string other;
    std::string output;
    std::string format = "json";

    auto common = [&](CLI::App* sub) {
        sub->add_option("--p", opts.p, "odd prime")->check(CLI::PositiveNumber);
        sub->add_option("--threads", opts.threads, "worker threads (0: hardware concurrency)");
        sub->add_option("--output,-o", output, "output file (relative paths resolve under ELLCOOP_OUTPUT_DIR)");
    };
    auto with_n = [&](CLI::App* sub) { sub->add_option("--n", opts.n, "index bound")->check(CLI::PositiveNumber); };
    auto with_degree = [&](CLI::App* sub) {
        sub->add_option("--max-degree", opts.max_degree, "internal degree bound")->check(CLI::NonNegativeNumber);
        sub->add_option("--slice-limit", opts.slice_limit, "largest admissible chain slice");
    };

    auto* hz = app.add_subcommand("hazewinkel", "Hazewinkel generators v_n in terms of l_k");
    common(hz);
    with_n(hz);
    auto* eta = app.add_subcommand("eta-r", "right units eta_R(l_n), eta_R(v_n)");
    common(eta);
    with_n(eta);
    auto* img = app.add_subcommand("ell-image", "images of v_n in ell_*BP, congruences and correction terms");
    common(img);
    with_n(img);
    auto* tor = app.add_subcommand("tor-table", "Koszul homology table for a case");
    common(tor);
    with_degree(tor);
    tor->add_option("--case", opts.kase, "ell | ellbar | hq | hfp")
        ->check(CLI::IsMember({"ell", "ellbar", "hq", "hfp"}));
    tor->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    auto* delta = app.add_subcommand("delta", "Delta_x classes, syzygies and products");
    common(delta);
    delta->add_option("--case", opts.kase, "synthetic | ellbar")->check(CLI::IsMember({"synthetic", "ellbar"}));
    delta->add_option("--indices", indices, "comma-separated labels")->required();
    delta->add_option("--with", other, "second index list for a product");
    auto* bss = app.add_subcommand("bockstein", "Bockstein spectral sequence pages");
    common(bss);
    with_degree(bss);
    bss->add_option("--case", opts.kase, "synthetic | ell")->check(CLI::IsMember({"synthetic", "ell"}));
    bss->add_option("--r-max", opts.r_max, "last page")->check(CLI::PositiveNumber);
    auto* sq = app.add_subcommand("steenrod-q", "Q_1 Q_0 on a product of taubar generators");
    common(sq);
    sq->add_option("--indices", indices, "comma-separated taubar indices (>= 2, increasing)")->required();
    auto* tb = app.add_subcommand("torsion-basis", "Steenrod-side torsion basis");
    common(tb);
    with_degree(tb);
    auto* cg = app.add_subcommand("congruence", "congruences mod (pu) in the rational model");
    common(cg);
    with_n(cg);
    auto* cc = app.add_subcommand("crosscheck", "Tor table against the Steenrod torsion basis");
    common(cc);
    with_degree(cc);

    // Per-command defaults that differ from the shared ones.
    delta->preparse_callback([&](std::size_t) { opts.kase = "synthetic"; });
    bss->preparse_callback([&](std::size_t) {
        opts.kase = "synthetic";
        opts.max_degree = 24;
    });

    CLI11_PARSE(app, argc, argv);

    try {
        opts.indices = parse_indices(indices);
        opts.other = parse_indices(other);
        const std::string command = app.get_subcommands().front()->get_name();
        std::string text;
        bool ok = true;
        if (command == "tor-table" && format == "csv") {
            text = ellcoop::tor_table_csv(opts);
        }
        else {
            const ellcoop::Report report = ellcoop::run_command(command, opts);
            ok = report.ok;
            text = report.json.dump(2) + "\n";
        }
        if (output.empty()) {
            std::cout << text;
        }
        else {
            const auto path = resolve_output(output);
            if (path.has_parent_path())
                std::filesystem::create_directories(path.parent_path());
            std::ofstream out(path, std::ios::binary);
            if (!out)
                throw std::runtime_error("cannot write " + path.string());
            out << text;
        }
        if (!ok) {
            std::cerr << "ellcoop: " << command << ": a checked assertion failed\n";
            return 3;
        }
        return 0;
    }
    catch (const ellcoop::InfeasibleError& e) {
        std::cerr << "ellcoop: refused: " << e.what() << '\n';
        return 4;
    }
    catch (const std::exception& e) {
        std::cerr << "ellcoop: error: " << e.what() << '\n';
        return 2;
    }
}
