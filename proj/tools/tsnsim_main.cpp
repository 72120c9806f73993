#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tsnsim/tsnsim.hpp"

namespace {

/// "A..B" inclusive seed range.
bool parse_seed_range(const std::string& text, std::uint64_t& lo, std::uint64_t& hi)
{
    auto pos = text.find("..");
    if (pos == std::string::npos || pos == 0 || pos + 2 >= text.size()) return false;
    try {
        std::size_t used = 0;
        lo = std::stoull(text.substr(0, pos), &used);
        if (used != pos) return false;
        std::string rest = text.substr(pos + 2);
        hi = std::stoull(rest, &used);
        if (used != rest.size()) return false;
    } catch (const std::exception&) {
        return false;
    }
    return lo <= hi;
}

/// Insert a seed tag before the final extension: trace.csv -> trace.s7.csv.
std::string seeded_path(const std::string& path, std::uint64_t seed)
{
    std::string tag = ".s" + std::to_string(seed);
    auto slash = path.find_last_of('/');
    auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + tag;
    return path.substr(0, dot) + tag + path.substr(dot);
}

bool write_output(const std::string& path, const std::string& body)
{
    if (path.empty()) {
        std::cout << body;
        return true;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file: " << path << "\n";
        return false;
    }
    out << body;
    return out.good();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Deterministic simulator for time sync over bridged networks"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_path;
    std::string format = "csv";
    std::string seeds_range;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string duration_text;

    CLI::App* run = app.add_subcommand("run", "Execute a scenario and emit its trace");
    run->add_option("--scenario", scenario_path, "Scenario file (JSON)")->required();
    CLI::Option* seed_opt =
        run->add_option("--seed", seed, "Seed override for a single run");
    CLI::Option* seeds_opt =
        run->add_option("--seeds", seeds_range, "Inclusive seed range A..B, one run per seed");
    seed_opt->excludes(seeds_opt);
    run->add_option("--out", out_path, "Output path (stdout if omitted)");
    run->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--duration", duration_text,
                    "Duration override, e.g. 250ms or 60s (integers are picoseconds)");

    CLI::App* validate =
        app.add_subcommand("validate", "Parse and validate a scenario, run nothing");
    validate->add_option("--scenario", scenario_path, "Scenario file (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    seed_given = seed_opt->count() > 0;

    try {
        tsnsim::Scenario scenario = tsnsim::load_scenario(scenario_path);

        if (validate->parsed()) {
            std::cout << "ok: " << scenario.name << "\n";
            return 0;
        }

        if (!duration_text.empty()) {
            auto d = tsnsim::parse_duration(duration_text);
            if (!d || d->ps <= 0) {
                std::cerr << "error: invalid --duration value: " << duration_text << "\n";
                return 2;
            }
            scenario.duration = *d;
        }

        std::vector<std::uint64_t> seeds;
        if (seeds_opt->count() > 0) {
            std::uint64_t lo = 0, hi = 0;
            if (!parse_seed_range(seeds_range, lo, hi)) {
                std::cerr << "error: invalid --seeds range: " << seeds_range << "\n";
                return 2;
            }
            for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        } else {
            seeds.push_back(seed_given ? seed : scenario.seed);
        }

        bool many = seeds.size() > 1;
        for (std::uint64_t s : seeds) {
            tsnsim::Scenario variant = scenario;
            variant.seed = s;
            tsnsim::MetricsTrace trace = tsnsim::run_scenario(variant);
            std::string body = format == "csv"
                                   ? tsnsim::write_csv(trace)
                                   : tsnsim::build_report(variant, trace).dump(2) + "\n";
            std::string path = out_path;
            if (many && !out_path.empty()) path = seeded_path(out_path, s);
            if (!write_output(path, body)) return 1;
        }
        return 0;
    } catch (const tsnsim::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
