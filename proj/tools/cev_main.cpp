#include "cev/analytic.hpp"
#include "cev/errors.hpp"
#include "cev/lattice.hpp"
#include "cev/mc_oracle.hpp"
#include "cev/params.hpp"
#include "cev/pricing.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

struct Options {
    cev::CevParams params;
    double strike = 1.0;
    double maturity = 1.0;
    int steps = 365;
    std::vector<int> steps_list;
    cev::ExerciseStyle style = cev::ExerciseStyle::european;
    cev::OptionKind kind = cev::OptionKind::put;
    cev::WeightsMode mode = cev::WeightsMode::exact_h;
    cev::WeightsMode table_mode = cev::WeightsMode::approx_p;
    bool dump_lattice = false;
    std::string format;
    std::string out_path;
    std::string fixture = "fixtures/table1.csv";
    std::int64_t paths = 100000;
    int mc_steps = 365;
    std::uint64_t seed = 0;
    bool antithetic = false;
};

// Output stream selection: --out PATH or standard output.
class Sink {
  public:
    explicit Sink(const std::string& path) {
        if (path.empty()) return;
        file_.open(path);
        if (!file_) throw cev::validation_error("cannot open output file: " + path);
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

std::string pick_format(const Options& o, const char* fallback) {
    return o.format.empty() ? fallback : o.format;
}

void require_steps(int steps) {
    if (steps < 1) throw cev::validation_error("steps must be >= 1");
}

int cmd_price(const Options& o) {
    require_steps(o.steps);
    cev::validate_for_tree(o.params);
    const cev::Lattice lat = cev::build_lattice(o.params, o.maturity, o.steps);
    Sink sink(o.out_path);
    if (o.dump_lattice) {
        sink.stream() << cev::lattice_to_json(lat) << '\n';
        return 0;
    }
    const cev::PayoffSpec payoff{o.kind, o.strike};
    const cev::PricingResult res = cev::price_option(lat, payoff, o.style, o.params, o.mode);
    if (pick_format(o, "json") == "csv") {
        sink.stream() << "price,style,mode,n_steps\n"
                      << format_double(res.price) << ',' << cev::to_string(res.style) << ','
                      << cev::to_string(res.mode) << ',' << res.n_steps << '\n';
    } else {
        sink.stream() << cev::pricing_result_to_json(res) << '\n';
    }
    return 0;
}

struct FixtureRow {
    double beta, s, e, t, analytic, tree365, tree730;
};

std::vector<FixtureRow> load_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cev::validation_error("fixture not found: " + path);
    std::vector<FixtureRow> rows;
    std::string line;
    if (!std::getline(in, line))
        throw cev::validation_error("fixture is empty: " + path);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        FixtureRow r{};
        char comma;
        if (!(ss >> r.beta >> comma >> r.s >> comma >> r.e >> comma >> r.t >> comma
                 >> r.analytic >> comma >> r.tree365 >> comma >> r.tree730))
            throw cev::validation_error("malformed fixture row: " + line);
        rows.push_back(r);
    }
    if (rows.empty()) throw cev::validation_error("fixture has no data rows: " + path);
    return rows;
}

int cmd_table1(const Options& o) {
    const std::vector<FixtureRow> fixture = load_fixture(o.fixture);

    struct Cell {
        double beta, s, t;
        const char* kind;
        double value, reference, delta, tol;
    };
    std::vector<Cell> cells;
    cells.reserve(fixture.size() * 3);
    for (const FixtureRow& r : fixture) {
        cev::CevParams p;
        p.s0 = r.s;
        p.beta = r.beta;
        const double analytic = cev::european_price_cev(p, r.e, r.t, cev::OptionKind::put);
        const cev::PayoffSpec payoff{cev::OptionKind::put, r.e};
        const auto tree = [&](int n) {
            const cev::Lattice lat = cev::build_lattice(p, r.t, n);
            return cev::price_option(lat, payoff, cev::ExerciseStyle::european, p, o.table_mode).price;
        };
        const double t365 = tree(365);
        const double t730 = tree(730);
        cells.push_back({r.beta, r.s, r.t, "analytic", analytic, r.analytic, analytic - r.analytic, 0.0005});
        cells.push_back({r.beta, r.s, r.t, "tree365", t365, r.tree365, t365 - r.tree365, 0.001});
        cells.push_back({r.beta, r.s, r.t, "tree730", t730, r.tree730, t730 - r.tree730, 0.001});
    }

    Sink sink(o.out_path);
    if (pick_format(o, "csv") == "csv") {
        sink.stream() << "beta,S,T,kind,value,reference,delta\n";
        for (const Cell& c : cells)
            sink.stream() << format_double(c.beta) << ',' << format_double(c.s) << ','
                          << format_double(c.t) << ',' << c.kind << ','
                          << format_double(c.value) << ',' << format_double(c.reference) << ','
                          << format_double(c.delta) << '\n';
    } else {
        json arr = json::array();
        for (const Cell& c : cells)
            arr.push_back({{"beta", c.beta}, {"S", c.s}, {"T", c.t}, {"kind", c.kind},
                           {"value", c.value}, {"reference", c.reference}, {"delta", c.delta}});
        sink.stream() << arr.dump() << '\n';
    }

    const Cell* worst = nullptr;
    double worst_excess = 0.0;
    for (const Cell& c : cells) {
        const double excess = std::fabs(c.delta) - c.tol;
        if (excess > worst_excess) {
            worst_excess = excess;
            worst = &c;
        }
    }
    if (worst != nullptr) {
        std::cerr << "worst mismatch: kind=" << worst->kind << " beta=" << format_double(worst->beta)
                  << " S=" << format_double(worst->s) << " T=" << format_double(worst->t)
                  << " value=" << format_double(worst->value)
                  << " reference=" << format_double(worst->reference)
                  << " |delta|=" << format_double(std::fabs(worst->delta))
                  << " tolerance=" << format_double(worst->tol) << '\n';
        return 1;
    }
    return 0;
}

int cmd_converge(const Options& o) {
    if (o.steps_list.empty())
        throw cev::validation_error("steps list must be non-empty and ascending");
    for (size_t i = 0; i < o.steps_list.size(); ++i) {
        require_steps(o.steps_list[i]);
        if (i > 0 && o.steps_list[i] <= o.steps_list[i - 1])
            throw cev::validation_error("steps list must be non-empty and ascending");
    }
    cev::validate_for_tree(o.params);
    const double analytic = cev::european_price_cev(o.params, o.strike, o.maturity, o.kind);
    const cev::PayoffSpec payoff{o.kind, o.strike};

    struct Row {
        int n;
        double tree, analytic, abs_error;
    };
    std::vector<Row> rows;
    for (const int n : o.steps_list) {
        const cev::Lattice lat = cev::build_lattice(o.params, o.maturity, n);
        const double tree =
            cev::price_option(lat, payoff, cev::ExerciseStyle::european, o.params, o.mode).price;
        rows.push_back({n, tree, analytic, std::fabs(tree - analytic)});
    }

    Sink sink(o.out_path);
    if (pick_format(o, "csv") == "csv") {
        sink.stream() << "n_steps,tree_price,analytic_price,abs_error\n";
        for (const Row& r : rows)
            sink.stream() << r.n << ',' << format_double(r.tree) << ','
                          << format_double(r.analytic) << ',' << format_double(r.abs_error) << '\n';
    } else {
        json arr = json::array();
        for (const Row& r : rows)
            arr.push_back({{"n_steps", r.n}, {"tree_price", r.tree},
                           {"analytic_price", r.analytic}, {"abs_error", r.abs_error}});
        sink.stream() << arr.dump() << '\n';
    }
    return 0;
}

int cmd_envelope(const Options& o) {
    require_steps(o.steps);
    const cev::Lattice lat = cev::build_lattice(o.params, o.maturity, o.steps);
    const double sq = std::sqrt(lat.dt);

    struct Row {
        double tau, tree_upper, tree_lower, ode_upper, ode_lower;
    };
    std::vector<Row> rows;
    rows.reserve(static_cast<size_t>(lat.levels()));
    for (int i = 1; i <= lat.levels(); ++i) {
        const double tau = (i - 1) * sq;
        rows.push_back({tau, lat.at(i, 2 * i - 1), lat.at(i, 1),
                        cev::envelope_closed_form(o.params, tau, cev::Direction::up),
                        cev::envelope_closed_form(o.params, tau, cev::Direction::down)});
    }

    Sink sink(o.out_path);
    if (pick_format(o, "csv") == "csv") {
        sink.stream() << "tau,tree_upper,tree_lower,ode_upper,ode_lower\n";
        for (const Row& r : rows)
            sink.stream() << format_double(r.tau) << ',' << format_double(r.tree_upper) << ','
                          << format_double(r.tree_lower) << ',' << format_double(r.ode_upper) << ','
                          << format_double(r.ode_lower) << '\n';
    } else {
        json arr = json::array();
        for (const Row& r : rows)
            arr.push_back({{"tau", r.tau}, {"tree_upper", r.tree_upper},
                           {"tree_lower", r.tree_lower}, {"ode_upper", r.ode_upper},
                           {"ode_lower", r.ode_lower}});
        sink.stream() << arr.dump() << '\n';
    }
    return 0;
}

int cmd_density(const Options& o) {
    require_steps(o.steps);
    const cev::Lattice lat = cev::build_lattice(o.params, o.maturity, o.steps);
    const auto dist = cev::terminal_distribution(lat, o.params, o.mode);
    const bool with_lognormal = std::fabs(o.params.beta - 2.0) < 1e-9;

    // Mass over the node's local bin: half the gap to each neighbor, one-sided
    // at the edges.
    const auto bin_width = [&](size_t k) {
        if (k == 0) return dist[1].first - dist[0].first;
        if (k + 1 == dist.size()) return dist[k].first - dist[k - 1].first;
        return 0.5 * (dist[k + 1].first - dist[k - 1].first);
    };

    Sink sink(o.out_path);
    if (pick_format(o, "csv") == "csv") {
        sink.stream() << (with_lognormal ? "price,tree_mass,tree_density,lognormal_density\n"
                                         : "price,tree_mass,tree_density\n");
        for (size_t k = 0; k < dist.size(); ++k) {
            sink.stream() << format_double(dist[k].first) << ',' << format_double(dist[k].second)
                          << ',' << format_double(dist[k].second / bin_width(k));
            if (with_lognormal)
                sink.stream() << ',' << format_double(cev::lognormal_pdf(
                    dist[k].first, o.params.s0, o.params.r, o.params.sigma, o.maturity));
            sink.stream() << '\n';
        }
    } else {
        json arr = json::array();
        for (size_t k = 0; k < dist.size(); ++k) {
            json row = {{"price", dist[k].first}, {"tree_mass", dist[k].second},
                        {"tree_density", dist[k].second / bin_width(k)}};
            if (with_lognormal)
                row["lognormal_density"] = cev::lognormal_pdf(dist[k].first, o.params.s0,
                                                              o.params.r, o.params.sigma, o.maturity);
            arr.push_back(std::move(row));
        }
        sink.stream() << arr.dump() << '\n';
    }
    return 0;
}

int cmd_mc(const Options& o) {
    cev::McConfig cfg;
    cfg.n_paths = o.paths;
    cfg.n_time_steps = o.mc_steps;
    cfg.seed = o.seed;
    cfg.antithetic = o.antithetic;
    const cev::McPrice res = cev::mc_european_price(o.params, o.strike, o.maturity, o.kind, cfg);

    Sink sink(o.out_path);
    if (pick_format(o, "csv") == "csv") {
        sink.stream() << "price,std_error,n_paths,n_steps,seed,antithetic\n"
                      << format_double(res.price) << ',' << format_double(res.std_error) << ','
                      << cfg.n_paths << ',' << cfg.n_time_steps << ',' << cfg.seed << ','
                      << (cfg.antithetic ? "true" : "false") << '\n';
    } else {
        const json out = {{"price", res.price}, {"std_error", res.std_error},
                          {"n_paths", cfg.n_paths}, {"n_steps", cfg.n_time_steps},
                          {"seed", cfg.seed}, {"antithetic", cfg.antithetic}};
        sink.stream() << out.dump() << '\n';
    }
    return 0;
}

void add_market_flags(CLI::App* cmd, Options& o, bool with_yield) {
    cmd->add_option("--s0", o.params.s0, "spot price")->capture_default_str();
    cmd->add_option("--beta", o.params.beta, "CEV elasticity")->capture_default_str();
    cmd->add_option("--sigma", o.params.sigma, "volatility scale")->capture_default_str();
    cmd->add_option("--r", o.params.r, "risk-free rate")->capture_default_str();
    if (with_yield)
        cmd->add_option("--q", o.params.q, "dividend yield")->capture_default_str();
    cmd->add_option("--t", o.maturity, "maturity in years")->capture_default_str();
}

void add_io_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", o.out_path, "output path (default: stdout)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"CEV option pricer on an exactly recombining binomial lattice"};
    app.require_subcommand(1);

    Options o;

    const std::map<std::string, cev::ExerciseStyle> style_map{
        {"european", cev::ExerciseStyle::european}, {"american", cev::ExerciseStyle::american}};
    const std::map<std::string, cev::OptionKind> kind_map{
        {"put", cev::OptionKind::put}, {"call", cev::OptionKind::call}};
    const std::map<std::string, cev::WeightsMode> mode_map{
        {"exact-h", cev::WeightsMode::exact_h}, {"approx-p", cev::WeightsMode::approx_p}};

    CLI::App* price = app.add_subcommand("price", "Price one option on the lattice");
    add_market_flags(price, o, false);
    price->add_option("--strike", o.strike, "strike")->capture_default_str();
    price->add_option("--steps", o.steps, "time steps")->capture_default_str();
    price->add_option("--style", o.style, "exercise style")
        ->transform(CLI::CheckedTransformer(style_map))->capture_default_str();
    price->add_option("--kind", o.kind, "payoff kind")
        ->transform(CLI::CheckedTransformer(kind_map))->capture_default_str();
    price->add_option("--mode", o.mode, "transition weight mode")
        ->transform(CLI::CheckedTransformer(mode_map))->capture_default_str();
    price->add_flag("--dump-lattice", o.dump_lattice,
                    "emit the built lattice as JSON instead of the price");
    add_io_flags(price, o);

    CLI::App* table1 = app.add_subcommand(
        "table1", "Reprice the 27-cell reference grid and diff against the fixture");
    table1->add_option("--fixture", o.fixture, "fixture CSV path")->capture_default_str();
    table1->add_option("--mode", o.table_mode,
                       "tree weight mode (approx-p reproduces the reference tree values)")
        ->transform(CLI::CheckedTransformer(mode_map))->capture_default_str();
    add_io_flags(table1, o);

    CLI::App* converge = app.add_subcommand("converge", "Tree-vs-closed-form error per step count");
    add_market_flags(converge, o, false);
    converge->add_option("--strike", o.strike, "strike")->capture_default_str();
    converge->add_option("--steps", o.steps_list, "comma-separated ascending step counts")
        ->delimiter(',');
    converge->add_option("--kind", o.kind, "payoff kind")
        ->transform(CLI::CheckedTransformer(kind_map))->capture_default_str();
    converge->add_option("--mode", o.mode, "transition weight mode")
        ->transform(CLI::CheckedTransformer(mode_map))->capture_default_str();
    add_io_flags(converge, o);

    CLI::App* envelope = app.add_subcommand("envelope", "Extreme branches vs the asymptotic curves");
    add_market_flags(envelope, o, false);
    envelope->add_option("--steps", o.steps, "time steps")->capture_default_str();
    add_io_flags(envelope, o);

    CLI::App* density = app.add_subcommand("density", "Tree-implied terminal density");
    add_market_flags(density, o, false);
    density->add_option("--steps", o.steps, "time steps")->capture_default_str();
    density->add_option("--mode", o.mode, "transition weight mode")
        ->transform(CLI::CheckedTransformer(mode_map))->capture_default_str();
    add_io_flags(density, o);

    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo European price with standard error");
    add_market_flags(mc, o, true);
    mc->add_option("--strike", o.strike, "strike")->capture_default_str();
    mc->add_option("--kind", o.kind, "payoff kind")
        ->transform(CLI::CheckedTransformer(kind_map))->capture_default_str();
    mc->add_option("--paths", o.paths, "simulated paths")->capture_default_str();
    mc->add_option("--mc-steps", o.mc_steps, "Euler time steps")->capture_default_str();
    mc->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
    mc->add_flag("--antithetic", o.antithetic, "antithetic variates");
    add_io_flags(mc, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (price->parsed()) return cmd_price(o);
        if (table1->parsed()) return cmd_table1(o);
        if (converge->parsed()) return cmd_converge(o);
        if (envelope->parsed()) return cmd_envelope(o);
        if (density->parsed()) return cmd_density(o);
        if (mc->parsed()) return cmd_mc(o);
    } catch (const cev::validation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const cev::numerical_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
