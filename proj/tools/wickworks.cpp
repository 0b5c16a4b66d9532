#include "criteria.hpp"

#include "wickworks/budget.hpp"
#include "wickworks/io.hpp"
#include "wickworks/phi4.hpp"
#include "wickworks/polynomial.hpp"
#include "wickworks/torusfield.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace wickworks;
namespace fs = std::filesystem;

namespace {

constexpr int exit_usage = 2;
constexpr int exit_failure = 1;

// Thrown for invalid combinations that the parser cannot express.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    double d = 1;
    int N = 8;
    int order = 3;
    std::vector<double> alpha;
    std::int64_t samples = 0;
    std::optional<std::uint64_t> seed;
    int grid = 0;
    std::string format;
    std::string out;
    int threads = 0;
};

// Writes to --out when given, otherwise to stdout.
void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + cfg.out + " for writing");
    f << text;
    if (!f) throw std::runtime_error("write failed: " + cfg.out);
}

int cmd_hermite(const RunConfig& cfg, const std::string& sigma2_text) {
    Rational sigma2;
    try {
        sigma2 = Rational(sigma2_text);
    } catch (const std::exception&) {
        throw UsageError("--sigma2 must be a rational number such as 1/2, got '" + sigma2_text + "'");
    }
    io::json rows = io::json::array();
    std::ostringstream text;
    for (int n = 0; n <= cfg.order; ++n) {
        const Polynomial h = sigma2 == 1 ? hermite(n) : hermite_scaled(n, sigma2);
        std::vector<std::string> coeffs;
        for (const Rational& c : h.coeffs()) coeffs.push_back(to_string(c));
        rows.push_back({{"n", n}, {"coefficients", coeffs}, {"text", h.to_string()}});
        text << "H_" << n << " = " << h.to_string() << '\n';
    }
    if (cfg.format == "json")
        emit(cfg, io::json{{"schema", "wickworks.hermite/1"}, {"sigma2", to_string(sigma2)}, {"polynomials", rows}}.dump(2) + "\n");
    else
        emit(cfg, text.str());
    return 0;
}

int cmd_diagrams(const RunConfig& cfg, int vertices, int arity, bool connected, bool external) {
    std::vector<int> arities;
    std::vector<std::string> labels;
    if (external) {
        arities = {1, 1};
        labels = {"x", "y"};
    }
    arities.insert(arities.end(), static_cast<std::size_t>(vertices), arity);
    int legs = 0;
    for (int a : arities) legs += a;
    if (legs % 2) throw UsageError("total number of legs is odd, no perfect matching exists");
    DiagramSum s = arities.empty() ? DiagramSum::unit() : generate_diagrams(arities, labels);
    if (connected) s = s.connected_part();
    if (cfg.format == "dot")
        emit(cfg, io::diagram_sum_to_dot(s));
    else
        emit(cfg, io::diagram_listing(arities, connected, s).dump(2) + "\n");
    return 0;
}

int cmd_phi4(const RunConfig& cfg, const std::string& variant_name) {
    const EnergyVariant variant = variant_name == "plain" ? EnergyVariant::plain : EnergyVariant::wick;
    const bool mc = cfg.samples > 0;
    if (mc && !cfg.seed) throw UsageError("--samples requires --seed");
    if (mc && cfg.alpha.empty()) throw UsageError("--samples requires --alpha");
    if (mc && cfg.d != 1 && cfg.d != 2) throw UsageError("Monte Carlo needs --d 1 or --d 2");
    if (!(cfg.d == 1 || cfg.d == 2 || (cfg.d >= 3 && cfg.d < 4))) throw UsageError("--d must be 1, 2 or in [3, 4)");

    if (cfg.format == "csv") {
        std::vector<ExpansionSeries> ladder;
        for (int n = 2; n < cfg.N; n *= 2) ladder.push_back(partition_ratio_series(cfg.d, n, cfg.order, variant));
        ladder.push_back(partition_ratio_series(cfg.d, cfg.N, cfg.order, variant));
        std::ostringstream os;
        io::write_ladder_csv(os, ladder);
        emit(cfg, os.str());
        return 0;
    }

    const ExpansionSeries series = partition_ratio_series(cfg.d, cfg.N, cfg.order, variant);
    std::optional<CountertermSet> counterterms;
    if (cfg.d == 3) counterterms = counterterms_d3(cfg.alpha.empty() ? 1.0 : cfg.alpha.front(), cfg.N);
    std::optional<io::json> mc_block;
    if (mc) {
        const auto results = mc_partition_ratio(static_cast<int>(cfg.d), cfg.N, cfg.alpha, cfg.samples, *cfg.seed, cfg.grid);
        mc_block = io::mc_to_json(results, cfg.samples, *cfg.seed);
        io::json rows = io::json::array();
        for (const auto& r : results) rows.push_back({{"alpha", r.alpha}, {"series", series.evaluate(r.alpha)}});
        (*mc_block)["series"] = rows;
    }
    emit(cfg, io::phi4_report(series, counterterms, mc_block).dump(2) + "\n");
    return 0;
}

int cmd_field(const RunConfig& cfg, const std::string& profile_name) {
    if (!cfg.seed) throw UsageError("field requires --seed");
    if (cfg.d != 1 && cfg.d != 2 && cfg.d != 3) throw UsageError("--d must be 1, 2 or 3");
    const int d = static_cast<int>(cfg.d);
    const int M = cfg.grid > 0 ? cfg.grid : 4 * cfg.N + 1;
    SpectralProfile profile;
    try {
        profile = SpectralProfile::parse(profile_name);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const FieldSample f = sample_field(profile, ModeLattice::build(d, cfg.N), *cfg.seed);
    const std::vector<double> values = f.grid(M, d == 1 ? GridMethod::direct : GridMethod::fft);

    const io::GridFormat format = cfg.format == "binary" ? io::GridFormat::binary : io::GridFormat::csv;
    fs::path data = cfg.out;
    data.replace_extension(format == io::GridFormat::csv ? ".csv" : ".bin");
    if (data == fs::path(cfg.out)) data += format == io::GridFormat::csv ? ".data.csv" : ".data.bin";

    std::ofstream df(data, std::ios::binary);
    if (!df) throw std::runtime_error("cannot open " + data.string() + " for writing");
    if (format == io::GridFormat::csv)
        io::write_grid_csv(df, values, d, M);
    else
        io::write_grid_binary(df, values);
    if (!df) throw std::runtime_error("write failed: " + data.string());
    emit(cfg, io::field_header(f, M, format, data.filename().string()).dump(2) + "\n");
    return 0;
}

int cmd_verify(const std::vector<int>& ids) {
    int failed = 0;
    verify::run_criteria(ids, [&](const verify::CriterionResult& r) {
        std::cout << verify::format_line(r) << std::endl;
        failed += !r.pass;
    });
    std::cout << (failed ? "FAILED " : "ALL PASSED ") << (ids.empty() ? verify::criterion_count : static_cast<int>(ids.size())) - failed
              << "/" << (ids.empty() ? verify::criterion_count : static_cast<int>(ids.size())) << std::endl;
    return failed ? exit_failure : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wickworks: Gaussian moments, Wick calculus, Feynman diagrams and the quartic model on the torus"};
    app.failure_message(CLI::FailureMessage::help);
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    app.add_option("--threads", cfg.threads, "worker threads (default: all cores)")->check(CLI::NonNegativeNumber);

    std::string hermite_format, diagrams_format, phi4_format, field_format;
    auto add_out = [&](CLI::App* sub) { sub->add_option("--out", cfg.out, "output path (default: stdout)"); };

    CLI::App* hermite_cmd = app.add_subcommand("hermite", "table of Hermite polynomials H_0 .. H_order");
    std::string sigma2 = "1";
    hermite_cmd->add_option("--order", cfg.order, "highest degree")->check(CLI::Range(0, 64))->required();
    hermite_cmd->add_option("--sigma2", sigma2, "variance parameter, an exact rational such as 1/2");
    hermite_cmd->add_option("--format", hermite_format, "text or json")->check(CLI::IsMember({"text", "json"}))->default_val("text");
    add_out(hermite_cmd);

    CLI::App* diagrams_cmd = app.add_subcommand("diagrams", "vacuum diagrams with their matching counts");
    int vertices = 2, arity = 4;
    bool connected = false, external = false;
    diagrams_cmd->add_option("--vertices", vertices, "number of internal vertices")->check(CLI::Range(0, 8));
    diagrams_cmd->add_option("--arity", arity, "legs per internal vertex")->check(CLI::Range(1, 6));
    diagrams_cmd->add_flag("--connected", connected, "keep connected classes only");
    diagrams_cmd->add_flag("--external", external, "add two labelled 1-valent points x and y");
    diagrams_cmd->add_option("--format", diagrams_format, "json or dot")->check(CLI::IsMember({"json", "dot"}))->default_val("json");
    add_out(diagrams_cmd);

    CLI::App* phi4_cmd = app.add_subcommand("phi4", "perturbative series of the quartic model, optional Monte Carlo");
    std::string variant = "wick";
    phi4_cmd->add_option("--d", cfg.d, "dimension: 1, 2, or 3 <= d < 4")->default_val(1);
    phi4_cmd->add_option("--N", cfg.N, "cutoff")->check(CLI::Range(1, 256))->default_val(8);
    phi4_cmd->add_option("--order", cfg.order, "expansion order")->check(CLI::Range(0, 8))->default_val(3);
    phi4_cmd->add_option("--alpha", cfg.alpha, "coupling(s) for Monte Carlo and counterterms")->delimiter(',');
    phi4_cmd->add_option("--samples", cfg.samples, "Monte Carlo samples (enables Monte Carlo)")->check(CLI::NonNegativeNumber);
    phi4_cmd->add_option("--seed", cfg.seed, "master seed");
    phi4_cmd->add_option("--grid", cfg.grid, "quadrature grid side (default 4N + 1)")->check(CLI::NonNegativeNumber);
    phi4_cmd->add_option("--variant", variant, "wick or plain")->check(CLI::IsMember({"wick", "plain"}));
    phi4_cmd->add_option("--format", phi4_format, "json, or csv for a ladder over N")
        ->check(CLI::IsMember({"json", "csv"}))
        ->default_val("json");
    add_out(phi4_cmd);

    CLI::App* field_cmd = app.add_subcommand("field", "sample a Gaussian field on a grid");
    std::string profile = "gff";
    field_cmd->add_option("--profile", profile, "gff, white or fractional:s");
    field_cmd->add_option("--d", cfg.d, "dimension 1, 2 or 3")->default_val(1);
    field_cmd->add_option("--N", cfg.N, "cutoff")->check(CLI::Range(0, 256))->default_val(8);
    field_cmd->add_option("--grid", cfg.grid, "grid side (default 4N + 1)")->check(CLI::NonNegativeNumber);
    field_cmd->add_option("--seed", cfg.seed, "seed");
    field_cmd->add_option("--format", field_format, "csv or binary")->check(CLI::IsMember({"csv", "binary"}))->default_val("csv");
    field_cmd->add_option("--out", cfg.out, "header path; the grid goes next to it")->required();

    CLI::App* verify_cmd = app.add_subcommand("verify", "run the acceptance criteria and print a pass/fail table");
    std::vector<int> ids;
    verify_cmd->add_option("--criteria", ids, "subset of criteria, e.g. 1,11,16")
        ->delimiter(',')
        ->check(CLI::Range(1, verify::criterion_count));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        budget();
    } catch (const std::exception& e) {
        std::cerr << "wickworks: invalid WICKWORKS_BUDGET: " << e.what() << "\n";
        return exit_usage;
    }
    if (cfg.threads > 0) set_default_threads(cfg.threads);

    if (*hermite_cmd) cfg.format = hermite_format;
    if (*diagrams_cmd) cfg.format = diagrams_format;
    if (*phi4_cmd) cfg.format = phi4_format;
    if (*field_cmd) cfg.format = field_format;

    try {
        if (*hermite_cmd) return cmd_hermite(cfg, sigma2);
        if (*diagrams_cmd) return cmd_diagrams(cfg, vertices, arity, connected, external);
        if (*phi4_cmd) return cmd_phi4(cfg, variant);
        if (*field_cmd) return cmd_field(cfg, profile);
        if (*verify_cmd) return cmd_verify(ids);
    } catch (const UsageError& e) {
        std::cerr << "wickworks: " << e.what() << "\n\n" << app.help() << std::flush;
        return exit_usage;
    } catch (const BudgetExceeded& e) {
        std::cerr << "wickworks: budget exceeded: " << e.what() << "\n";
        return exit_failure;
    } catch (const std::exception& e) {
        std::cerr << "wickworks: " << e.what() << "\n";
        return exit_failure;
    }
    return exit_failure;
}
