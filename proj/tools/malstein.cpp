// Command-line front end: self-check suite plus the application bound reports.
// Output is a single canonical JSON document (sorted keys, 17 significant
// digits) or its flat CSV form, so identical inputs give identical bytes.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include <malstein/report_json.hpp>
#include <malstein/verify.hpp>

namespace {

using namespace malstein;
using nlohmann::json;
using Rows = std::vector<std::pair<std::string, std::string>>;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("BadInput", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json_file(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::exception& e) {
        fail("ParseError", path + ": " + e.what());
    }
}

std::vector<double> number_list(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_array())
        fail("ParseError", "expected an array under \"" + key + "\"");
    std::vector<double> out;
    out.reserve(j[key].size());
    for (const auto& v : j[key]) {
        if (!v.is_number()) fail("ParseError", "\"" + key + "\" must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

DiscreteDistribution distribution_from_json(const json& j, const std::string& what) {
    if (!j.is_object()) fail("ParseError", what + " must be {\"values\":[...],\"probs\":[...]}");
    return DiscreteDistribution(number_list(j, "values"), number_list(j, "probs"));
}

std::uint64_t resolve_cap(std::uint64_t flag_value, bool flag_given) {
    if (flag_given) return flag_value;
    if (const char* env = std::getenv("MALSTEIN_MAX_OUTCOMES")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0' || v == 0)
            fail("BadInput", "MALSTEIN_MAX_OUTCOMES must be a positive integer");
        return v;
    }
    return default_outcome_cap;
}

void emit(const std::string& format, const std::string& json_doc, const Rows& rows) {
    if (format == "csv")
        std::fputs(csv_document(rows).c_str(), stdout);
    else
        std::printf("%s\n", json_doc.c_str());
}

void add_report(JsonObject& doc, Rows& rows, const std::string& key, const BoundReport& r) {
    doc.raw(key, report_to_json(r));
    report_to_csv_rows(r, rows, key + ".");
}

int cmd_verify(std::uint64_t seed, int rounds, const std::string& format) {
    const VerifyResult res = verify_suite(seed, rounds);
    std::vector<std::string> fams;
    Rows rows;
    for (const auto& f : res.families) {
        fams.push_back(JsonObject()
                           .text("name", f.name)
                           .integer("cases", f.cases)
                           .integer("failures", f.failures)
                           .str());
        rows.push_back({"family:" + f.name,
                        std::to_string(f.cases - f.failures) + "/" + std::to_string(f.cases)});
    }
    const bool ok = res.all_passed();
    rows.push_back({"all_passed", ok ? "true" : "false"});
    const std::string doc = JsonObject()
                                .boolean("all_passed", ok)
                                .raw("families", json_array(fams))
                                .integer("rounds", rounds)
                                .integer("seed", static_cast<long long>(seed))
                                .str();
    emit(format, doc, rows);
    return ok ? 0 : 1;
}

int cmd_mono(const std::string& edges_path, int colors, std::uint64_t cap,
             std::uint64_t samples, std::uint64_t seed, const std::string& format) {
    const Graph g = parse_edge_list(read_file(edges_path));
    const GraphStats stats = graph_stats(g);
    const auto [mean, var] = t2_moments(stats.m, colors);

    JsonObject doc;
    Rows rows;
    doc.integer("m", stats.m)
        .integer("vertices", g.n)
        .integer("colors", colors)
        .number("mean", mean)
        .number("variance", var)
        .integer("c4_count", stats.c4_count)
        .integer("wedge_sum_first", stats.wedge_sums.first)
        .integer("wedge_sum_second", stats.wedge_sums.second)
        .number("fang_bound", fang_bound(stats.m, colors));
    rows.push_back({"m", std::to_string(stats.m)});
    rows.push_back({"vertices", std::to_string(g.n)});
    rows.push_back({"colors", std::to_string(colors)});
    rows.push_back({"mean", json_number(mean)});
    rows.push_back({"variance", json_number(var)});
    rows.push_back({"c4_count", std::to_string(stats.c4_count)});
    rows.push_back({"wedge_sum_first", std::to_string(stats.wedge_sums.first)});
    rows.push_back({"wedge_sum_second", std::to_string(stats.wedge_sums.second)});
    rows.push_back({"fang_bound", json_number(fang_bound(stats.m, colors))});
    add_report(doc, rows, "mono_bound", mono_bound(stats, colors));

    bool enumerable = true;
    std::uint64_t total = 1;
    for (int v = 0; v < g.n && enumerable; ++v) {
        if (total > cap / static_cast<std::uint64_t>(colors)) enumerable = false;
        total *= static_cast<std::uint64_t>(colors);
    }
    doc.boolean("enumerable", enumerable);
    rows.push_back({"enumerable", enumerable ? "true" : "false"});
    if (enumerable) {
        const Functional f = mono_edge_functional(g, colors, cap);
        const LawOfF law = law_of(f);
        doc.number("d_kolmogorov", kolmogorov_distance(law))
            .number("d_wasserstein", wasserstein_distance(law));
        rows.push_back({"d_kolmogorov", json_number(kolmogorov_distance(law))});
        rows.push_back({"d_wasserstein", json_number(wasserstein_distance(law))});
        const auto [msw, msk] = ms_bounds(f);
        const auto [cow, cok] = co_bounds(f);
        const auto [cdw, cdk] = cdc_bounds(f);
        add_report(doc, rows, "ms_wasserstein", msw);
        add_report(doc, rows, "ms_kolmogorov", msk);
        add_report(doc, rows, "co_wasserstein", cow);
        add_report(doc, rows, "co_kolmogorov", cok);
        add_report(doc, rows, "cdc_wasserstein", cdw);
        add_report(doc, rows, "cdc_kolmogorov", cdk);
    }
    if (samples > 0) {
        const SampleSummary summary = sample_mono_edges(g, colors, samples, seed, 8);
        const auto [dk_hat, radius] = empirical_kolmogorov(summary);
        const std::string s = JsonObject()
                                  .integer("samples", static_cast<long long>(samples))
                                  .integer("seed", static_cast<long long>(seed))
                                  .number("empirical_d_kolmogorov", dk_hat)
                                  .number("dkw_radius", radius)
                                  .str();
        doc.raw("sampling", s);
        rows.push_back({"sampling.samples", std::to_string(samples)});
        rows.push_back({"sampling.seed", std::to_string(seed)});
        rows.push_back({"sampling.empirical_d_kolmogorov", json_number(dk_hat)});
        rows.push_back({"sampling.dkw_radius", json_number(radius)});
    }
    emit(format, doc.str(), rows);
    return 0;
}

int cmd_randsum(const std::string& spec_path, std::uint64_t cap, const std::string& format) {
    const json j = parse_json_file(spec_path);
    if (!j.contains("N") || !j.contains("X"))
        fail("ParseError", "random-sum spec needs \"N\" and \"X\" distributions");
    const RandomSumSpec spec = make_random_sum_spec(distribution_from_json(j["N"], "\"N\""),
                                                    distribution_from_json(j["X"], "\"X\""));
    JsonObject doc;
    Rows rows;
    add_report(doc, rows, "bound", rs_bound(spec));
    doc.number("sigma", std::sqrt(spec.e_n * spec.e_x2));
    rows.push_back({"sigma", json_number(std::sqrt(spec.e_n * spec.e_x2))});

    bool enumerable = true;
    std::uint64_t total = spec.law_n.size();
    for (int k = 0; k < spec.n_max && enumerable; ++k) {
        if (total > cap / spec.law_x.size()) enumerable = false;
        total *= spec.law_x.size();
    }
    doc.boolean("enumerable", enumerable);
    rows.push_back({"enumerable", enumerable ? "true" : "false"});
    if (enumerable) {
        const LawOfF law = law_of(random_sum_functional(spec, cap));
        doc.number("d_kolmogorov", kolmogorov_distance(law))
            .number("d_wasserstein", wasserstein_distance(law));
        rows.push_back({"d_kolmogorov", json_number(kolmogorov_distance(law))});
        rows.push_back({"d_wasserstein", json_number(wasserstein_distance(law))});
    }
    emit(format, doc.str(), rows);
    return 0;
}

int cmd_dejong(const std::string& spec_path, int p, double kappa, std::uint64_t cap,
               const std::string& format) {
    const json j = parse_json_file(spec_path);
    if (!j.contains("space") || !j["space"].is_array() || !j.contains("table"))
        fail("ParseError", "functional spec needs \"space\" (list of distributions) and \"table\"");
    std::vector<DiscreteDistribution> coords;
    for (const auto& d : j["space"]) coords.push_back(distribution_from_json(d, "space entry"));
    const SpacePtr sp = build_space(std::move(coords), cap);
    const Functional f(sp, number_list(j, "table"));
    const auto [w, k] = dejong_bounds(f, p, kappa);
    JsonObject doc;
    Rows rows;
    add_report(doc, rows, "wasserstein", w);
    add_report(doc, rows, "kolmogorov", k);
    emit(format, doc.str(), rows);
    return 0;
}

int cmd_distances(const std::string& law_path, const std::string& format) {
    const json j = parse_json_file(law_path);
    std::vector<double> atoms = number_list(j, "atoms");
    std::vector<double> probs = number_list(j, "probs");
    if (atoms.empty() || atoms.size() != probs.size())
        fail("ParseError", "\"atoms\" and \"probs\" must be nonempty and equally long");
    std::vector<std::size_t> order(atoms.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });
    LawOfF law;
    long double mass = 0.0L;
    for (std::size_t i : order) {
        if (!std::isfinite(atoms[i])) fail("BadInput", "atoms must be finite");
        if (!(probs[i] >= 0.0)) fail("BadInput", "probabilities must be nonnegative");
        if (!law.atoms.empty() && atoms[i] == law.atoms.back())
            fail("BadInput", "duplicate atom " + std::to_string(atoms[i]));
        law.atoms.push_back(atoms[i]);
        law.probs.push_back(probs[i]);
        mass += probs[i];
    }
    if (std::abs(static_cast<double>(mass) - 1.0) > 1e-9)
        fail("BadDistribution", "probabilities must sum to 1");
    const std::string doc = JsonObject()
                                .integer("atom_count", static_cast<long long>(law.atoms.size()))
                                .number("d_kolmogorov", kolmogorov_distance(law))
                                .number("d_wasserstein", wasserstein_distance(law))
                                .str();
    Rows rows{{"atom_count", std::to_string(law.atoms.size())},
              {"d_kolmogorov", json_number(kolmogorov_distance(law))},
              {"d_wasserstein", json_number(wasserstein_distance(law))}};
    emit(format, doc, rows);
    return 0;
}

void print_error(const std::string& code, const std::string& message) {
    std::fprintf(stderr, "%s\n",
                 JsonObject().text("error", code).text("message", message).str().c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact normal-approximation bounds on finite product spaces"};
    app.require_subcommand(1);
    std::string format = "json";
    std::uint64_t cap_flag = default_outcome_cap;
    bool cap_given = false;
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    app.add_option("--max-outcomes", cap_flag, "outcome grid cap (env MALSTEIN_MAX_OUTCOMES)")
        ->each([&cap_given](const std::string&) { cap_given = true; });

    auto* verify = app.add_subcommand("verify", "run the randomized invariant suite");
    std::uint64_t verify_seed = 1;
    int verify_rounds = 30;
    verify->add_option("--seed", verify_seed, "suite seed")->capture_default_str();
    verify->add_option("--rounds", verify_rounds, "rounds per family")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    auto* mono = app.add_subcommand("mono", "monochromatic-edge bound report for a graph");
    std::string edges_path;
    int colors = 0;
    std::uint64_t samples = 0, mono_seed = 1;
    mono->add_option("--edges", edges_path, "edge list file, one \"u v\" pair per line")
        ->required();
    mono->add_option("--colors", colors, "number of colors")->required();
    mono->add_option("--samples", samples, "Monte Carlo sample count (0 = none)");
    mono->add_option("--seed", mono_seed, "Monte Carlo seed")->capture_default_str();

    auto* randsum = app.add_subcommand("randsum", "random-sum bound report");
    std::string randsum_spec;
    randsum->add_option("--spec", randsum_spec, "JSON with \"N\" and \"X\" distributions")
        ->required();

    auto* dejong = app.add_subcommand("dejong", "degenerate U-statistic bound report");
    std::string dejong_spec;
    int dejong_p = 0;
    double kappa = 0.0;
    dejong->add_option("--spec", dejong_spec, "JSON with \"space\" and \"table\"")->required();
    dejong->add_option("--p", dejong_p, "chaos order")->required();
    dejong->add_option("--kappa", kappa, "fourth-moment constant kappa_p")->required();

    auto* distances = app.add_subcommand("distances", "exact distances to the normal law");
    std::string law_path;
    distances->add_option("--law", law_path, "JSON with \"atoms\" and \"probs\"")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("BadUsage", e.what());
        return 2;
    }

    try {
        const std::uint64_t cap = resolve_cap(cap_flag, cap_given);
        if (*verify) return cmd_verify(verify_seed, verify_rounds, format);
        if (*mono) return cmd_mono(edges_path, colors, cap, samples, mono_seed, format);
        if (*randsum) return cmd_randsum(randsum_spec, cap, format);
        if (*dejong) return cmd_dejong(dejong_spec, dejong_p, kappa, cap, format);
        if (*distances) return cmd_distances(law_path, format);
    } catch (const malstein::Error& e) {
        print_error(e.code(), e.what());
        return 2;
    } catch (const std::exception& e) {
        print_error("Internal", e.what());
        return 2;
    }
    return 2;
}
