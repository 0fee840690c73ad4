#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polaraut/commands.hpp"

namespace {

void add_shared_options(CLI::App& sub, polaraut::RunOptions& o, std::string& out_path)
{
    sub.add_option("--n", o.n, "number of variables (code length 2^n)");
    sub.add_option("--K", o.K, "code dimension");
    sub.add_flag("--pw", o.pw, "polarization-weight construction (default)");
    sub.add_option("--bec", o.bec, "BEC construction with this erasure probability");
    sub.add_option("--mmin", o.mmin, "generator monomial masks (explicit decreasing code)")->delimiter(',');
    sub.add_option("--code", o.code, "code spec as inline JSON or a file path");
    sub.add_option("--seed", o.seed, "random seed");
    sub.add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub.add_option("--out", out_path, "write output to this file instead of stdout");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Decreasing monomial codes: automorphism groups, witnesses and ensemble decoding"};
    app.require_subcommand(1, 1);

    polaraut::RunOptions o;
    o.jobs = polaraut::default_jobs();
    std::string out_path;

    struct Entry {
        const char* name;
        const char* help;
    };
    const Entry entries[] = {
        {"construct", "build a code and report its monomials, generators and block profile"},
        {"profile", "block profile and BLTA group order"},
        {"verify-theorem", "enumerate the affine automorphism group and compare it with BLTA (n <= 5)"},
        {"enumerate-aut", "count the linear automorphisms of a code (n <= 5)"},
        {"witness", "run the transposition witness, or the reduction when --j is given"},
        {"sample-perms", "sample BLTA maps and their induced permutations"},
        {"simulate", "Monte Carlo BLER of SC and AE-SC decoding (CSV)"},
        {"selftest", "randomized and exhaustive property checks of the linear-algebra routines"},
    };
    for (const auto& e : entries) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        add_shared_options(*sub, o, out_path);
        const std::string name = e.name;
        if (name == "verify-theorem") sub->add_option("--battery", o.battery, "fixed code battery: n3 or n4");
        if (name == "witness") {
            sub->add_option("--matrix", o.matrix, "map as JSON {\"A\":[row masks],\"b\":mask} or comma-separated row masks");
            sub->add_option("--i", o.i, "transposition index i");
            sub->add_option("--j", o.j, "transposition index j (defaults to i+1)");
        }
        if (name == "sample-perms" || name == "simulate") {
            sub->add_option("--L", o.L, "ensemble size");
            sub->add_flag("--no-screen", o.no_screen, "keep permutations that behave like the identity under SC");
        }
        if (name == "sample-perms") {
            sub->add_flag("--lta-only", o.lta_only, "sample lower-triangular maps only");
            sub->add_option("--profile", o.profile, "block sizes, e.g. 1,2,2,1")->delimiter(',');
        }
        if (name == "simulate") {
            sub->add_option("--frames", o.frames, "frames per point");
            sub->add_option("--snr", o.snr, "Eb/N0 points in dB (AWGN)")->delimiter(',');
            sub->add_option("--epsilon", o.epsilon, "erasure probabilities (BEC)")->delimiter(',');
            sub->add_option("--decoder", o.decoder, "sc, ae or both");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    o.command = app.get_subcommands().front()->get_name();

    polaraut::CommandResult result;
    try {
        result = polaraut::run_command(o);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    if (out_path.empty()) {
        std::cout << result.output;
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot write '" << out_path << "'\n";
            return 2;
        }
        f << result.output;
    }
    return result.exit_code;
}
