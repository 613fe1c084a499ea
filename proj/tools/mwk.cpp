// Command-line driver for the matrix Whittaker kernel library: kernel tabulation,
// finite-model enumeration, operator-identity verification, spectral scans, tail
// asymptotics, and the Bessel scaling limit.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mwk/besselimit.hpp"
#include "mwk/finite.hpp"
#include "mwk/io.hpp"
#include "mwk/kernels.hpp"
#include "mwk/operators.hpp"
#include "mwk/params.hpp"
#include "mwk/spectral.hpp"
#include "mwk/tail.hpp"

namespace {

using mwk::Block;
using mwk::Complex;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitTolerance = 3;
constexpr int kExitUsage = 64;

struct Table {
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void kv(const std::string& k, const std::string& v) { config.emplace_back(k, v); }

    void write_csv(std::ostream& os) const {
        for (const auto& [k, v] : config) os << "# " << k << "=" << v << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i)
            os << columns[i] << (i + 1 < columns.size() ? "," : "\n");
        for (const auto& r : rows)
            for (std::size_t i = 0; i < r.size(); ++i)
                os << r[i] << (i + 1 < r.size() ? "," : "\n");
    }

    void write_json(std::ostream& os) const {
        nlohmann::json j;
        for (const auto& [k, v] : config) j["config"][k] = v;
        j["records"] = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json rec;
            for (std::size_t i = 0; i < r.size(); ++i) rec[columns[i]] = r[i];
            j["records"].push_back(rec);
        }
        os << j.dump(2) << "\n";
    }
};

struct CommonOpts {
    std::string output;
    std::string format = "csv";
    bool no_timestamp = false;
    std::uint64_t seed = 1;
};

void emit(const Table& t, const CommonOpts& common) {
    std::ostringstream buf;
    if (common.format == "json")
        t.write_json(buf);
    else
        t.write_csv(buf);
    if (common.output.empty()) {
        std::cout << buf.str();
    } else {
        std::string path = common.output;
        const char* dir = std::getenv("MWK_OUTPUT_DIR");
        if (dir && path.find('/') == std::string::npos)
            path = std::string(dir) + "/" + path;
        std::ofstream out(path);
        if (!out) throw std::invalid_argument("cannot open output file: " + path);
        out << buf.str();
    }
}

std::string fmt(double v) { return mwk::format_double(v); }

std::string fmt_complex(Complex v) {
    std::string im = mwk::format_double(std::abs(v.imag()));
    return mwk::format_double(v.real()) + (v.imag() < 0 ? "-" : "+") + im + "i";
}

struct ParamFlags {
    std::string z, z_prime, a, mu;

    mwk::ParameterSet resolve() const {
        if (!z.empty() || !z_prime.empty()) {
            if (z.empty() || z_prime.empty())
                throw std::invalid_argument("both --z and --z-prime are required together");
            return mwk::make_parameters(mwk::parse_complex(z), mwk::parse_complex(z_prime));
        }
        if (a.empty() || mu.empty())
            throw std::invalid_argument("provide either --z/--z-prime or --a/--mu");
        Complex av = mwk::parse_complex(a), mv = mwk::parse_complex(mu);
        return mwk::make_parameters(av + mv, av - mv);
    }
};

void add_param_flags(CLI::App* cmd, ParamFlags& p) {
    cmd->add_option("--z", p.z, "parameter z (complex literal re+imi or re)");
    cmd->add_option("--z-prime", p.z_prime, "parameter z'");
    cmd->add_option("--a", p.a, "parameter a = (z+z')/2");
    cmd->add_option("--mu", p.mu, "parameter mu = (z-z')/2");
}

void stamp(Table& t, const CommonOpts& common, const mwk::ParameterSet* params) {
    if (!common.no_timestamp) {
        auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[64];
        std::strftime(buf, sizeof buf, "%F %T", std::gmtime(&now));
        t.kv("timestamp", buf);
    }
    if (params) {
        t.kv("z", fmt_complex(params->z));
        t.kv("z_prime", fmt_complex(params->z_prime));
        t.kv("a", fmt(params->a));
        t.kv("mu", fmt_complex(params->mu));
        t.kv("sigma", fmt(params->sigma));
    }
}

Block block_of(const std::string& name) {
    if (name == "pp") return Block::PP;
    if (name == "pm") return Block::PM;
    if (name == "mp") return Block::MP;
    if (name == "mm") return Block::MM;
    throw std::invalid_argument("unknown block '" + name + "' (expected pp|pm|mp|mm)");
}

int run_eval(const ParamFlags& pf, const CommonOpts& common, const std::string& block,
             const std::vector<double>& xs, const std::vector<double>& ys) {
    auto params = pf.resolve();
    mwk::KernelMachine mc(params);
    Block tag = block_of(block);
    Table t;
    stamp(t, common, &params);
    t.kv("subcommand", "eval");
    t.kv("block", block);
    t.columns = {"x", "y", "value"};
    for (double x : xs)
        for (double y : ys)
            t.rows.push_back({fmt(x), fmt(y), fmt(mc.k_block(tag, x, y))});
    emit(t, common);
    return kExitOk;
}

int run_finite(const CommonOpts& common, const std::string& input, bool enumerate,
               const std::vector<std::string>& correlations, int sample_count) {
    mwk::FiniteKernel l = mwk::read_kernel_json(input);
    Table t;
    stamp(t, common, nullptr);
    t.kv("subcommand", "finite");
    t.kv("input", input);
    t.kv("n1", std::to_string(l.n1));
    t.kv("n2", std::to_string(l.n2));

    mwk::WeightTable table = mwk::weight_distribution(l);
    t.kv("normalizer", fmt(table.normalizer));

    if (enumerate) {
        t.columns = {"kind", "configuration", "probability"};
        for (std::uint32_t mask = 0; mask < table.probabilities.size(); ++mask) {
            std::string bits;
            for (int i = 0; i < l.order(); ++i) bits += ((mask >> i) & 1u) ? '1' : '0';
            t.rows.push_back({"weight", bits, fmt(table.probabilities[mask])});
        }
    }
    if (!correlations.empty()) {
        mwk::FiniteKernel k = mwk::k_from_l(l);
        if (t.columns.empty()) t.columns = {"kind", "configuration", "probability"};
        for (const auto& spec : correlations) {
            std::vector<int> pts;
            std::stringstream ss(spec);
            std::string tok;
            while (std::getline(ss, tok, ',')) pts.push_back(std::stoi(tok));
            Complex rho = mwk::correlation(k, pts);
            t.rows.push_back({"correlation", spec, fmt(rho.real())});
        }
    }
    if (sample_count > 0) {
        if (t.columns.empty()) t.columns = {"kind", "configuration", "probability"};
        auto draws = mwk::sample(table, common.seed, sample_count);
        for (const auto& d : draws) {
            std::string bits;
            for (int i = 0; i < l.order(); ++i) bits += d.contains(i) ? '1' : '0';
            t.rows.push_back({"sample", bits, ""});
        }
    }
    emit(t, common);
    return kExitOk;
}

int run_verify(const ParamFlags& pf, const CommonOpts& common, const std::string& what,
               int nodes, double xmax, int levels, const std::string& mu2_text) {
    auto params = pf.resolve();
    Table t;
    stamp(t, common, &params);
    t.kv("subcommand", "verify");
    t.kv("what", what);
    t.kv("nodes", std::to_string(nodes));
    t.kv("xmax", fmt(xmax));
    t.kv("levels", std::to_string(levels));

    bool ok = true;
    if (what == "factorization" || what == "resolvent") {
        mwk::ResidualReport report =
            what == "factorization" ? mwk::verify_factorization(params, nodes, xmax, levels)
                                    : mwk::verify_resolvent(params, nodes, xmax, levels);
        t.columns = {"level", "report_nodes", "grid_nodes", "guard_x_min", "name", "residual"};
        for (std::size_t l = 0; l < report.levels.size(); ++l) {
            const auto& lvl = report.levels[l];
            for (const auto& [name, r] : lvl.residuals)
                t.rows.push_back({std::to_string(l), std::to_string(lvl.report_nodes),
                                  std::to_string(lvl.grid_nodes), fmt(lvl.guard_x_min), name,
                                  fmt(r)});
        }
        ok = report.strictly_decreasing();
        for (const auto& [name, r] : report.levels.back().residuals) ok = ok && r < 1e-2;
        t.kv("decreasing", ok ? "true" : "false");
    } else if (what == "commute") {
        Complex mu2 = mu2_text.empty() ? Complex(0.0, 0.3) : mwk::parse_complex(mu2_text);
        double coarse =
            mwk::commutation_check(params.a, params.mu, mu2, nodes / 2, xmax, false, 1e-6);
        double fine = mwk::commutation_check(params.a, params.mu, mu2, nodes, xmax, false, 1e-12);
        t.columns = {"level", "residual"};
        t.rows.push_back({"0", fmt(coarse)});
        t.rows.push_back({"1", fmt(fine)});
        ok = fine < coarse && fine < 1e-3;
    } else if (what == "norms") {
        mwk::KernelMachine mc(params);
        double target = params.sigma / std::cos(mwk::kPi * params.a);
        t.columns = {"level", "x_min", "x_max", "nodes", "norm", "target"};
        double prev = 0.0;
        struct Stage {
            double xmin, xmax;
            int n;
        };
        int l = 0;
        for (Stage st : {Stage{1e-6, 40.0, nodes}, Stage{1e-14, 60.0, nodes * 3 / 2},
                         Stage{1e-30, 100.0, nodes * 2}}) {
            auto g = mwk::QuadratureGrid::composite(st.xmin, st.xmax, st.n);
            auto op = mwk::discretize(
                [&](double x, double y) { return mc.l_block(mwk::LBlock::A, x, y); }, g);
            double nrm = mwk::operator_norm(op.matrix);
            ok = ok && nrm < target && nrm > prev;
            prev = nrm;
            t.rows.push_back({std::to_string(l++), fmt(st.xmin), fmt(st.xmax),
                              std::to_string(g.size()), fmt(nrm), fmt(target)});
        }
        ok = ok && prev > 0.98 * target;
    } else {
        throw std::invalid_argument("unknown --what '" + what + "'");
    }
    emit(t, common);
    return ok ? kExitOk : kExitTolerance;
}

int run_spectrum(const ParamFlags& pf, const CommonOpts& common,
                 const std::vector<double>& m_list, const std::vector<double>& probes) {
    auto params = pf.resolve();
    Table t;
    stamp(t, common, &params);
    t.kv("subcommand", "spectrum");
    t.columns = {"m", "lambda_closed", "lambda_resolvent", "lambda_rayleigh"};
    for (double m : m_list) {
        double closed = mwk::kpp_eigenvalue(params, m);
        double lab = mwk::ab_eigenvalue(params, m);
        double rayleigh = mwk::rayleigh_kpp_eigenvalue(params, m);
        t.rows.push_back({fmt(m), fmt(closed), fmt(lab / (1.0 + lab)), fmt(rayleigh)});
    }
    for (double m : m_list) {
        if (probes.empty()) break;
        auto rows = mwk::transform_identity(mwk::TransformSide::A, params, m, probes);
        for (const auto& r : rows)
            t.rows.push_back({fmt(m), "probe_x=" + fmt(r.x), fmt(r.lhs), fmt(r.residual)});
    }
    emit(t, common);
    return kExitOk;
}

int run_tail(const ParamFlags& pf, const CommonOpts& common, const std::vector<double>& u_grid,
             const std::vector<double>& delta_grid, const std::vector<double>& xi_list) {
    auto params = pf.resolve();
    mwk::TailConstants tc = mwk::tail_constants(params);
    Table t;
    stamp(t, common, &params);
    t.kv("subcommand", "tail");
    t.kv("c_density", fmt(tc.c_density));
    t.kv("rate_b", fmt(tc.rate_b));
    t.kv("rate_a", fmt_complex(tc.rate_a));
    t.columns = {"table", "arg", "col1", "col2", "col3", "col4"};
    for (double d : delta_grid)
        t.rows.push_back({"blocks", fmt(d), fmt(mwk::tail_block(Block::PP, params, d)),
                          fmt(mwk::tail_block(Block::PM, params, d)),
                          fmt(mwk::tail_block(Block::MP, params, d)),
                          fmt(mwk::tail_block(Block::MM, params, d))});
    for (double u : u_grid) {
        Complex g = mwk::symbol_g(params, u);
        Complex ft = mwk::profile_transform(params, Block::PP, u);
        t.rows.push_back({"symbol", fmt(u), fmt(mwk::symbol_f(params, u)), fmt(g.real()),
                          fmt(g.imag()),
                          fmt(std::abs(ft - Complex(mwk::symbol_f(params, u), 0)))});
    }
    if (!xi_list.empty()) {
        std::vector<std::pair<double, double>> pts;
        for (double xi : xi_list) pts.emplace_back(xi, xi);
        auto rows = mwk::tail_convergence(params, Block::PP, pts);
        for (const auto& r : rows)
            t.rows.push_back(
                {"convergence", fmt(r.xi), fmt(r.rescaled), fmt(r.tail), fmt(r.abs_err), ""});
    }
    emit(t, common);
    return kExitOk;
}

int run_limit(const CommonOpts& common, const std::string& z0, const std::string& z0p,
              const std::vector<int>& n_list, double xi, double eta, const std::string& block) {
    auto base = mwk::make_parameters(mwk::parse_complex(z0), mwk::parse_complex(z0p));
    auto rows = mwk::scaled_convergence(base, n_list, block_of(block), xi, eta);
    Table t;
    stamp(t, common, &base);
    t.kv("subcommand", "limit");
    t.kv("block", block);
    t.kv("xi", fmt(xi));
    t.kv("eta", fmt(eta));
    t.columns = {"N", "scaled", "limit", "abs_err", "coeff_gap"};
    for (const auto& r : rows)
        t.rows.push_back({std::to_string(r.n), fmt(r.scaled), fmt(r.limit), fmt(r.abs_err),
                          fmt(r.coeff_gap)});
    emit(t, common);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"matrix Whittaker kernel laboratory"};
    app.require_subcommand(1);
    app.fallthrough();

    CommonOpts common;
    app.add_option("--output", common.output, "output file (default: stdout)");
    app.add_option("--format", common.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--no-timestamp", common.no_timestamp, "omit the timestamp header");
    app.add_option("--seed", common.seed, "random seed for sampling");
    std::string config_path;
    app.add_option("--config", config_path, "key=value config file (flags take precedence)");

    // eval
    auto* eval = app.add_subcommand("eval", "tabulate a kernel block on a grid");
    ParamFlags eval_params;
    add_param_flags(eval, eval_params);
    std::string eval_block = "pp";
    std::vector<double> eval_x{1.0}, eval_y{1.0};
    eval->add_option("--block", eval_block, "pp|pm|mp|mm");
    eval->add_option("--x", eval_x, "x grid values")->delimiter(',');
    eval->add_option("--y", eval_y, "y grid values")->delimiter(',');

    // finite
    auto* finite = app.add_subcommand("finite", "finite two-block model from a JSON kernel");
    std::string finite_input;
    bool finite_enum = false;
    std::vector<std::string> finite_corr;
    int finite_sample = 0;
    finite->add_option("--input", finite_input, "kernel JSON file")->required();
    finite->add_flag("--enumerate", finite_enum, "emit the full weight table");
    finite->add_option("--correlate", finite_corr, "comma-separated point list (repeatable)");
    finite->add_option("--sample", finite_sample, "number of configurations to sample");

    // verify
    auto* verify = app.add_subcommand("verify", "operator identity verification");
    ParamFlags verify_params;
    add_param_flags(verify, verify_params);
    std::string verify_what = "resolvent", verify_mu2;
    int verify_nodes = 200, verify_levels = 3;
    double verify_xmax = 40.0;
    verify->add_option("--what", verify_what, "factorization|resolvent|commute|norms");
    verify->add_option("--nodes", verify_nodes, "reporting nodes at the finest level");
    verify->add_option("--xmax", verify_xmax, "domain upper end");
    verify->add_option("--levels", verify_levels, "refinement levels");
    verify->add_option("--mu2", verify_mu2, "second mu for --what commute");

    // spectrum
    auto* spectrum = app.add_subcommand("spectrum", "eigenvalue scans");
    ParamFlags spectrum_params;
    add_param_flags(spectrum, spectrum_params);
    std::vector<double> spectrum_m{0.3, 0.6, 1.2}, spectrum_probes;
    spectrum->add_option("--m-list", spectrum_m, "spectral parameters")->delimiter(',');
    spectrum->add_option("--probes", spectrum_probes, "probe points for the transform identity")
        ->delimiter(',');

    // tail
    auto* tail = app.add_subcommand("tail", "tail kernel, symbol, convergence");
    ParamFlags tail_params;
    add_param_flags(tail, tail_params);
    std::vector<double> tail_u, tail_delta, tail_xi;
    tail->add_option("--u-grid", tail_u, "symbol evaluation points")->delimiter(',');
    tail->add_option("--delta-grid", tail_delta, "tail block offsets")->delimiter(',');
    tail->add_option("--xi-list", tail_xi, "diagonal convergence points")->delimiter(',');

    // limit
    auto* limit = app.add_subcommand("limit", "Bessel scaling limit sweep");
    std::string limit_z0 = "0.55", limit_z0p = "0.35", limit_block = "pp";
    std::vector<int> limit_n{8, 16, 32, 64};
    double limit_xi = 1.0, limit_eta = 2.0;
    limit->add_option("--z0", limit_z0, "base parameter z0");
    limit->add_option("--z0-prime", limit_z0p, "base parameter z0'");
    limit->add_option("--N-list", limit_n, "even shifts")->delimiter(',');
    limit->add_option("--xi", limit_xi, "scaled coordinate xi");
    limit->add_option("--eta", limit_eta, "scaled coordinate eta");
    limit->add_option("--block", limit_block, "pp|pm|mp|mm");

    try {
        // config file values become option defaults, so flags take precedence;
        // the file is validated first so parse errors name the offending line
        std::string pre_config;
        for (int i = 1; i < argc; ++i) {
            std::string arg = argv[i];
            if (arg.rfind("--config=", 0) == 0) pre_config = arg.substr(9);
            else if (arg == "--config" && i + 1 < argc) pre_config = argv[i + 1];
        }
        if (!pre_config.empty()) {
            mwk::validate_config_file(pre_config);
            auto kv = mwk::read_config_file(pre_config);
            std::vector<CLI::App*> scopes{&app};
            for (auto* sub : app.get_subcommands({})) scopes.push_back(sub);
            for (auto* scope : scopes)
                for (auto* opt : scope->get_options())
                    for (const auto& [key, value] : kv)
                        if (opt->check_name("--" + key)) opt->default_val(value);
        }
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*eval) return run_eval(eval_params, common, eval_block, eval_x, eval_y);
        if (*finite)
            return run_finite(common, finite_input, finite_enum, finite_corr, finite_sample);
        if (*verify)
            return run_verify(verify_params, common, verify_what, verify_nodes, verify_xmax,
                              verify_levels, verify_mu2);
        if (*spectrum) return run_spectrum(spectrum_params, common, spectrum_m, spectrum_probes);
        if (*tail) return run_tail(tail_params, common, tail_u, tail_delta, tail_xi);
        if (*limit)
            return run_limit(common, limit_z0, limit_z0p, limit_n, limit_xi, limit_eta,
                             limit_block);
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const mwk::numeric_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitTolerance;
    }
    return kExitUsage;
}
