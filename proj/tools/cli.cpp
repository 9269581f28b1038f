#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

#include "tritile/harness.hpp"
#include "tritile/parallel.hpp"

namespace tritile {

namespace {

constexpr const char* kVersion = "1.0.0";

using Rows = std::vector<std::vector<std::string>>;

// Report in both output formats; the CSV form is a single table.
struct Output {
    Json result;
    Rows csv;
};

// The program path is normalized so reports do not depend on the install location.
std::string join_command(const std::vector<std::string>& args) {
    std::string s = "tritile";
    for (std::size_t i = 1; i < args.size(); ++i) s += ' ' + args[i];
    return s;
}

std::string dimer_text(const Region& r, const Dimer& d) {
    const Vec3& w = r.coords(d.white);
    const Vec3& b = r.coords(d.black);
    std::ostringstream ss;
    ss << w[0] << ' ' << w[1] << ' ' << w[2] << '>' << b[0] << ' ' << b[1] << ' ' << b[2];
    return ss.str();
}

std::string csv_cell(const Json& j) {
    if (j.is_null()) return "";
    if (j.is_string()) return j.get<std::string>();
    return j.dump();
}

MoveSet parse_moves(const std::string& s) {
    if (s == "flip") return MoveSet::flip;
    if (s == "fliptrit" || s == "flip+trit") return MoveSet::flip_trit;
    throw UsageError(0, "--moves must be flip or fliptrit");
}

TilingEnumerator::Order parse_order(const std::string& s) {
    TilingEnumerator::Order order{};
    std::stringstream ss(s);
    std::string item;
    std::size_t k = 0;
    std::array<bool, 6> used{};
    while (std::getline(ss, item, ',')) {
        int d = -1;
        for (int i = 0; i < dir::count; ++i) {
            if (item == dir::name(i)) d = i;
        }
        if (d < 0 || k >= 6 || used[static_cast<std::size_t>(d)]) {
            throw UsageError(0, "--order must be a permutation of +x,-x,+y,-y,+z,-z");
        }
        used[static_cast<std::size_t>(d)] = true;
        order[k++] = d;
    }
    if (k != 6) throw UsageError(0, "--order must list all six directions");
    return order;
}

Json flux_json(const std::vector<std::int64_t>& f) { return Json(f); }

Output cmd_enumerate(const RegionPtr& r, bool count_only, const std::string& order_text) {
    const TilingEnumerator en(r, order_text.empty() ? TilingEnumerator::kCanonicalOrder : parse_order(order_text));
    Output o;
    o.result["region"] = region_to_json(*r);
    if (count_only) {
        const std::uint64_t n = en.count(thread_count());
        o.result["count"] = n;
        o.csv = {{"count"}, {std::to_string(n)}};
        return o;
    }
    Json tilings = Json::array();
    o.csv = {{"index", "hash", "dimers"}};
    std::uint64_t index = 0;
    en.for_each([&](const Tiling& t) {
        Json dimers = tiling_to_json(t)["dimers"];
        tilings.push_back(dimers);
        std::string text;
        for (const Dimer& d : t.dimers()) text += (text.empty() ? "" : ";") + dimer_text(*r, d);
        o.csv.push_back({std::to_string(index++), std::to_string(t.hash()), text});
        return true;
    });
    o.result["count"] = index;
    o.result["tilings"] = std::move(tilings);
    return o;
}

Output cmd_components(const RegionPtr& r, MoveSet moves) {
    Output o;
    o.result = components_report(r, moves);
    o.csv = {{"component", "size", "min_twist", "max_twist"}};
    std::size_t k = 0;
    for (const Json& c : o.result["components"]) {
        o.csv.push_back({std::to_string(k++), csv_cell(c["size"]), csv_cell(c["min_twist"]), csv_cell(c["max_twist"])});
    }
    return o;
}

Tiling load_tiling(const RegionPtr& r, const std::string& tiling_file, const std::string& fixture) {
    if (!tiling_file.empty()) return tiling_from_json(read_json_file(tiling_file), r);
    if (fixture == "mixed") return mixed_column_tiling(r);
    if (fixture.empty() || fixture == "base") return default_base_tiling(r);
    throw UsageError(0, "--fixture must be base or mixed");
}

Output cmd_invariants(const Tiling& t) {
    Output o;
    o.result = invariant_report(t);
    Json flux = o.result["flux"];
    o.csv = {{"flux", "modulus", "twist"}};
    std::string f;
    if (flux.is_array()) {
        for (const Json& v : flux) f += (f.empty() ? "" : " ") + v.dump();
    }
    o.csv.push_back({f, csv_cell(o.result["modulus"]), csv_cell(o.result["twist"])});
    return o;
}

Output cmd_refine(const Tiling& t, int k) {
    const Tiling refined = refine_tiling(t, k);
    Output o;
    o.result["k"] = k;
    o.result["before"] = invariant_report(t);
    o.result["after"] = invariant_report(refined);
    o.result["tiling"] = tiling_to_json(refined);
    o.csv = {{"wx", "wy", "wz", "bx", "by", "bz"}};
    for (const Dimer& d : refined.dimers()) {
        const Vec3& w = refined.region().coords(d.white);
        const Vec3& b = refined.region().coords(d.black);
        o.csv.push_back({std::to_string(w[0]), std::to_string(w[1]), std::to_string(w[2]), std::to_string(b[0]),
                         std::to_string(b[1]), std::to_string(b[2])});
    }
    return o;
}

Output cmd_sample(const Tiling& start, MoveSet moves, std::uint64_t steps, std::uint64_t seed) {
    const WalkResult w = random_walk({start.region_ptr(), moves, steps, seed}, start);
    Output o;
    o.result["region"] = region_to_json(start.region());
    o.result["moves"] = to_string(moves);
    o.result["steps"] = steps;
    o.result["steps_taken"] = w.steps_taken;
    o.result["status"] = w.frozen ? "frozen tiling" : "completed";
    o.result["distinct_visited"] = w.distinct_visited;
    o.result["final_hash"] = w.final_hash;
    if (start.region().kind() == RegionKind::torus) {
        o.result["flux"] = flux_json(w.flux);
        o.result["twist_histogram"] = nullptr;
    } else {
        Json hist = Json::array();
        for (const auto& [tw, n] : w.twist_histogram) hist.push_back({{"twist", tw}, {"count", n}});
        o.result["twist_histogram"] = std::move(hist);
    }
    o.csv = {{"twist", "count"}};
    for (const auto& [tw, n] : w.twist_histogram) o.csv.push_back({std::to_string(tw), std::to_string(n)});
    return o;
}

Output cmd_verify(const std::string& suite, std::uint64_t seed, bool& passed) {
    std::vector<SuiteResult> results;
    const bool all = suite == "all";
    if (all || suite == "euler") results.push_back(verify_euler(seed));
    if (all || suite == "twist") results.push_back(verify_twist());
    if (all || suite == "refine") results.push_back(verify_refine(seed));
    if (all || suite == "heightfn") results.push_back(verify_heightfn());
    if (results.empty()) throw UsageError(0, "unknown suite \"" + suite + "\" (euler, twist, refine, heightfn, all)");
    Output o;
    Json suites = Json::array();
    passed = true;
    o.csv = {{"suite", "property", "checked", "failed", "passed"}};
    for (const SuiteResult& s : results) {
        suites.push_back(s.to_json());
        passed = passed && s.passed();
        for (const PropertyResult& p : s.properties) {
            o.csv.push_back({s.suite, p.property, std::to_string(p.checked), std::to_string(p.failed),
                             p.passed() ? "true" : "false"});
        }
    }
    o.result["passed"] = passed;
    o.result["suites"] = std::move(suites);
    return o;
}

void write_report(std::ostream& os, const Output& o, const std::string& format, const std::string& command,
                  std::uint64_t seed) {
    if (format == "csv") {
        os << "# tritile " << kVersion << "\n# command: " << command << "\n# seed: " << seed << "\n";
        for (const auto& row : o.csv) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                const bool quote = row[i].find_first_of(",\"\n") != std::string::npos;
                std::string cell = row[i];
                if (quote) {
                    std::string q = "\"";
                    for (char ch : cell) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
                    cell = q + "\"";
                }
                os << (i ? "," : "") << cell;
            }
            os << "\n";
        }
        return;
    }
    Json report;
    report["tool"] = "tritile";
    report["version"] = kVersion;
    report["command"] = command;
    report["seed"] = seed;
    report["result"] = o.result;
    os << report.dump(2) << "\n";
}

// Argument index of the first region token after the subcommand name.
int region_position(const std::vector<std::string>& args, const std::string& sub, const std::vector<std::string>& tokens) {
    std::size_t i = 1;
    while (i < args.size() && args[i] != sub) ++i;
    for (std::size_t j = i + 1; j < args.size(); ++j) {
        if (!tokens.empty() && args[j] == tokens[0]) return static_cast<int>(j);
    }
    return static_cast<int>(std::min(i + 1, args.size()));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Domino tilings of 3D regions: enumeration, move graphs, flux and twist", "tritile"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = 0;
    std::string out_path;
    std::string format = "json";
    app.add_option("--seed", seed, "Random seed")->capture_default_str();
    app.add_option("--out", out_path, "Write the report to this file");
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

    std::vector<std::string> region_tokens;
    auto add_region = [&](CLI::App* sub) {
        sub->add_option("region", region_tokens, "box L M N | torus a b c | file PATH")->required();
    };

    CLI::App* enumerate = app.add_subcommand("enumerate", "Enumerate all tilings of a region");
    add_region(enumerate);
    bool count_only = false;
    std::string order;
    enumerate->add_flag("--count-only", count_only, "Only report the number of tilings");
    enumerate->add_option("--order", order, "Neighbor order, a permutation of +x,-x,+y,-y,+z,-z");

    CLI::App* components = app.add_subcommand("components", "Connected components of the move graph");
    add_region(components);
    std::string moves_text = "flip";
    components->add_option("--moves", moves_text, "flip or fliptrit")->capture_default_str();

    CLI::App* invariants = app.add_subcommand("invariants", "Flux, modulus and twist of a tiling");
    add_region(invariants);
    std::string tiling_file, fixture;
    invariants->add_option("--tiling", tiling_file, "Tiling JSON file");
    invariants->add_option("--fixture", fixture, "base or mixed (used when --tiling is absent)");

    CLI::App* refine = app.add_subcommand("refine", "Refine a tiling by 5x5x5 subdivision");
    add_region(refine);
    int k = 1;
    refine->add_option("--tiling", tiling_file, "Tiling JSON file");
    refine->add_option("--fixture", fixture, "base or mixed (used when --tiling is absent)");
    refine->add_option("-k", k, "Number of refinements")->capture_default_str()->check(CLI::Range(0, 3));

    CLI::App* sample = app.add_subcommand("sample", "Seeded random walk over flips (and trits)");
    add_region(sample);
    std::uint64_t steps = 1000;
    sample->add_option("--moves", moves_text, "flip or fliptrit")->capture_default_str();
    sample->add_option("--steps", steps, "Walk length")->capture_default_str();
    sample->add_option("--tiling", tiling_file, "Start tiling (default: base tiling)");

    CLI::App* verify = app.add_subcommand("verify", "Run a verification suite");
    std::string suite = "all";
    verify->add_option("suite", suite, "euler, twist, refine, heightfn or all")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    const std::string command = join_command(args);
    CLI::App* sub = app.get_subcommands().front();
    bool passed = true;
    Output report;
    try {
        RegionPtr region;
        if (sub != verify) region = parse_region_spec(region_tokens, region_position(args, sub->get_name(), region_tokens));
        if (sub == enumerate) {
            report = cmd_enumerate(region, count_only, order);
        } else if (sub == components) {
            report = cmd_components(region, parse_moves(moves_text));
        } else if (sub == invariants) {
            report = cmd_invariants(load_tiling(region, tiling_file, fixture));
        } else if (sub == refine) {
            report = cmd_refine(load_tiling(region, tiling_file, fixture), k);
        } else if (sub == sample) {
            report = cmd_sample(load_tiling(region, tiling_file, ""), parse_moves(moves_text), steps, seed);
        } else {
            report = cmd_verify(suite, seed, passed);
        }
    } catch (const UsageError& e) {
        err << "usage error";
        if (e.position() > 0) err << " at argument " << e.position();
        err << ": " << e.what() << "\n";
        return 2;
    } catch (const RegionError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    if (out_path.empty()) {
        write_report(out, report, format, command, seed);
    } else {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) {
            err << "error: cannot write " << out_path << "\n";
            return 1;
        }
        write_report(file, report, format, command, seed);
    }
    return passed ? 0 : 1;
}

}  // namespace tritile
