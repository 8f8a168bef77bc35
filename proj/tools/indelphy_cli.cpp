#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "indelphy/experiment.hpp"
#include "indelphy/newick.hpp"
#include "indelphy/parallel.hpp"
#include "indelphy/seq_io.hpp"
#include "indelphy/simulator.hpp"
#include "indelphy/tree_gen.hpp"

namespace {

using namespace indelphy;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write: " + path);
    return out;
}

// stdout unless a path is given
struct OutTarget {
    std::ofstream file;
    std::ostream& stream(const std::string& path) {
        if (path.empty()) return std::cout;
        file = open_out(path);
        return file;
    }
};

// ---- config files: `key = value` lines, `#` starts a comment, keys named
// exactly like the long flags; values given on the command line win ----

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::size_t conf_size(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    unsigned long long x = 0;
    try {
        x = std::stoull(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != v.size() || v.empty())
        throw std::runtime_error("config: bad integer for " + key + ": '" + v + "'");
    return static_cast<std::size_t>(x);
}

double conf_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != v.size() || v.empty())
        throw std::runtime_error("config: bad number for " + key + ": '" + v + "'");
    return x;
}

bool conf_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::runtime_error("config: bad boolean for " + key + ": '" + v + "'");
}

std::vector<std::string> split_commas(const std::string& v) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(v);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: line " + std::to_string(lineno) +
                                     " is not `key = value`: '" + line + "'");
        out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

void add_model_flags(CLI::App* sub, ExperimentConfig& cfg) {
    sub->add_option("--model", cfg.model, "substitution model: cfn | jc | gtr")
        ->check(CLI::IsMember({"cfn", "jc", "gtr"}));
    sub->add_option("--gtr_file", cfg.gtr_file,
                    "rate file for --model gtr: n_states, Q row-major, pi");
}

void add_tree_flags(CLI::App* sub, ExperimentConfig& cfg) {
    sub->add_option("--n", cfg.n, "number of taxa")->check(CLI::Range(std::size_t{3}, std::size_t{4096}));
    sub->add_option("--f", cfg.f, "lower edge-time bound");
    sub->add_option("--g", cfg.g, "upper edge-time bound");
    sub->add_option("--eta", cfg.eta, "substitution rate");
    sub->add_option("--delta", cfg.delta, "deletion rate");
    sub->add_option("--lambda", cfg.lambda, "insertion rate");
    sub->add_option("--eta_lo", cfg.eta_lo, "per-edge substitution-rate lower bound");
    sub->add_option("--eta_hi", cfg.eta_hi,
                    "per-edge substitution-rate upper bound; > 0 switches to bounded-rates trees");
    sub->add_flag("--balanced", cfg.balanced, "complete balanced shape (n must be a power of 2)");
}

int cmd_simulate(const ExperimentConfig& cfg, const std::string& newick_in,
                 const std::string& out_path, const std::string& ancestry_path,
                 const std::string& newick_out, std::uint64_t replicate) {
    SubstitutionModel model = model_from_config(cfg.model, cfg.gtr_file);
    Phylogeny tree;
    if (!newick_in.empty()) {
        tree = parse_newick_tree(slurp(newick_in));
        for (auto& node : tree.nodes) {
            if (node.parent < 0) continue;
            node.edge.eta = cfg.eta;
            node.edge.delta = cfg.delta;
            node.edge.lambda = cfg.lambda;
        }
        tree.validate();
    } else {
        RngStream rng = make_stream(cfg.seed, replicate, 0, 2);
        ClockTreeOptions o;
        o.f = cfg.f;
        o.g = cfg.g;
        o.eta = cfg.eta;
        o.delta = cfg.delta;
        o.lambda = cfg.lambda;
        o.balanced = cfg.balanced;
        tree = cfg.eta_hi > 0
                   ? generate_bounded_rates_tree(cfg.n, o, RateBounds{cfg.eta_lo, cfg.eta_hi}, rng)
                   : generate_clock_tree(cfg.n, o, rng);
    }
    if (!newick_out.empty()) open_out(newick_out) << emit_newick(tree) << "\n";

    SimOptions opt;
    opt.ancestry = ancestry_path.empty() ? AncestryMode::None : AncestryMode::Full;
    opt.substitution = SubstitutionSampling::Transition;
    TreeSim sim = evolve_tree(tree, cfg.k_r, model, cfg.seed, replicate, opt,
                              KeepSequences::LeavesOnly);

    NamedSequences data;
    data.names = tree.leaf_names();
    for (int id : tree.leaves()) data.seqs.push_back(std::move(sim.seqs[id]));

    OutTarget target;
    write_sequences(target.stream(out_path), data, model);
    if (!ancestry_path.empty()) {
        auto os = open_out(ancestry_path);
        write_ancestry(os, data, sim.genealogy);
    }
    return 0;
}

int cmd_estimate(const ExperimentConfig& cfg, const std::string& in_path,
                 const std::string& out_path) {
    SubstitutionModel model = model_from_config(cfg.model, cfg.gtr_file);
    NamedSequences data;
    if (in_path.empty()) {
        data = read_sequences(std::cin, model);
    } else {
        std::ifstream in(in_path);
        if (!in) throw std::runtime_error("cannot open: " + in_path);
        data = read_sequences(in, model);
    }
    EstimatorConfig ecfg;
    ecfg.k0 = cfg.k0;
    ecfg.zeta = cfg.zeta;
    ecfg.variant = variant_from_name(cfg.variant);
    ecfg.eps_log = cfg.eps_log;
    DistanceMatrix dm =
        distance_matrix(data.seqs, data.names, model, ecfg, resolve_threads(cfg.threads));
    OutTarget target;
    dm.write(target.stream(out_path));
    return 0;
}

int cmd_reconstruct(const ExperimentConfig& cfg, const std::string& matrix_path,
                    const std::string& out_path, bool print_support) {
    DistanceMatrix dm;
    if (matrix_path.empty()) {
        dm = DistanceMatrix::read(std::cin);
    } else {
        std::ifstream in(matrix_path);
        if (!in) throw std::runtime_error("cannot open: " + matrix_path);
        dm = DistanceMatrix::read(in);
    }
    ReconstructionResult r = reconstruct_topology(dm, method_from_name(cfg.method));
    OutTarget target;
    target.stream(out_path) << emit_newick(r.topology) << "\n";
    if (print_support)
        std::cerr << "splits " << r.topology.splits().size() << ", fully_resolved "
                  << (r.fully_resolved ? "yes" : "no") << ", skipped_quartets "
                  << r.skipped_quartets << "\n";
    return 0;
}

int write_report(const RunReport& rep, const std::string& replicates_csv,
                 const std::string& checks_csv) {
    rep.write_text(std::cout);
    if (!replicates_csv.empty()) {
        auto os = open_out(replicates_csv);
        rep.write_replicates_csv(os);
    }
    if (!checks_csv.empty()) {
        auto os = open_out(checks_csv);
        rep.write_checks_csv(os);
    }
    return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulation, estimation and reconstruction for alignment-free "
                 "phylogenetics under insertion-deletion-substitution channels"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string newick_in, newick_out, out_path, ancestry_path, in_path, matrix_path;
    std::string replicates_csv, checks_csv;
    std::uint64_t replicate = 0;
    bool print_support = false;
    ValidateConfig vcfg;
    std::string config_path;

    CLI::App* sim = app.add_subcommand("simulate", "evolve sequences down a tree");
    sim->add_option("--config", config_path, "defaults file: key = value, # comments");
    add_tree_flags(sim, cfg);
    add_model_flags(sim, cfg);
    sim->add_option("--newick", newick_in,
                    "tree file; edge times from the file, rates from --eta/--delta/--lambda");
    sim->add_option("--k_r", cfg.k_r, "root sequence length");
    sim->add_option("--seed", cfg.seed, "RNG seed")->required();
    sim->add_option("--replicate", replicate, "replicate index within the seed");
    sim->add_option("--out", out_path, "sequence output file (default stdout)");
    sim->add_option("--ancestry", ancestry_path, "also write the site-ancestry sidecar here");
    sim->add_option("--newick_out", newick_out, "write the tree that was simulated");

    CLI::App* est = app.add_subcommand("estimate", "pairwise distances from sequences");
    est->add_option("--config", config_path, "defaults file: key = value, # comments");
    add_model_flags(est, cfg);
    est->add_option("--in", in_path, "sequence file (default stdin)");
    est->add_option("--variant", cfg.variant, "estimator: clock | nonclock | full | hamming")
        ->check(CLI::IsMember({"clock", "nonclock", "full", "hamming"}));
    est->add_option("--k0", cfg.k0, "prefix length (0: shortest sequence)");
    est->add_option("--zeta", cfg.zeta, "block-length exponent, in (1/2, 1)");
    est->add_option("--eps_log", cfg.eps_log, "correlation floor before the inf sentinel");
    est->add_option("--threads", cfg.threads, "worker threads (0: all)");
    est->add_option("--out", out_path, "matrix output file (default stdout)");

    CLI::App* rec = app.add_subcommand("reconstruct", "tree topology from a distance matrix");
    rec->add_option("--config", config_path, "defaults file: key = value, # comments");
    rec->add_option("--matrix", matrix_path, "distance matrix file (default stdin)");
    rec->add_option("--method", cfg.method, "buneman | nj")
        ->check(CLI::IsMember({"buneman", "nj"}));
    rec->add_option("--out", out_path, "newick output file (default stdout)");
    rec->add_flag("--stats", print_support, "print split counts to stderr");

    CLI::App* val = app.add_subcommand("validate",
                                       "run the statistical self-checks against the simulator");
    val->add_option("--config", config_path, "defaults file: key = value, # comments");
    val->add_option("--seed", vcfg.seed, "RNG seed");
    val->add_option("--threads", vcfg.threads, "worker threads (0: all)");
    val->add_option("--reps_scale", vcfg.reps_scale, "scale factor on replicate counts")
        ->check(CLI::PositiveNumber);
    val->add_option("--only", vcfg.only, "comma-separated check families to run")
        ->delimiter(',');
    val->add_option("--checks_csv", checks_csv, "write the check table here");

    CLI::App* exp = app.add_subcommand("experiment", "tree reconstruction sweep");
    exp->add_option("--config", config_path, "defaults file: key = value, # comments");
    add_tree_flags(exp, cfg);
    add_model_flags(exp, cfg);
    exp->add_option("--k_r", cfg.k_r, "root sequence length");
    exp->add_option("--k_r_sweep", cfg.k_r_sweep, "comma-separated root lengths, one stage each")
        ->delimiter(',');
    exp->add_option("--k0", cfg.k0, "estimator prefix length (0: shortest leaf)");
    exp->add_option("--zeta", cfg.zeta, "block-length exponent, in (1/2, 1)");
    exp->add_option("--variant", cfg.variant, "estimator: clock | nonclock | full | hamming")
        ->check(CLI::IsMember({"clock", "nonclock", "full", "hamming"}));
    exp->add_option("--method", cfg.method, "buneman | nj")
        ->check(CLI::IsMember({"buneman", "nj"}));
    exp->add_option("--replicates", cfg.replicates, "independent replicates per stage");
    exp->add_option("--seed", cfg.seed, "RNG seed")->required();
    exp->add_option("--min_success", cfg.min_success,
                    "exact-topology frequency gate on the final stage (0: report only)");
    exp->add_option("--threads", cfg.threads, "worker threads (0: all)");
    exp->add_option("--eps_log", cfg.eps_log, "correlation floor before the inf sentinel");
    exp->add_option("--replicates_csv", replicates_csv, "write the per-replicate table here");
    exp->add_option("--checks_csv", checks_csv, "write the check table here");

    // apply config-file defaults before the real parse so flags override them
    auto apply_config = [&](const std::string& path) {
        for (const auto& [key, value] : read_config_file(path)) {
            if (key == "n") cfg.n = conf_size(key, value);
            else if (key == "f") cfg.f = conf_double(key, value);
            else if (key == "g") cfg.g = conf_double(key, value);
            else if (key == "balanced") cfg.balanced = conf_bool(key, value);
            else if (key == "eta") cfg.eta = conf_double(key, value);
            else if (key == "delta") cfg.delta = conf_double(key, value);
            else if (key == "lambda") cfg.lambda = conf_double(key, value);
            else if (key == "eta_lo") cfg.eta_lo = conf_double(key, value);
            else if (key == "eta_hi") cfg.eta_hi = conf_double(key, value);
            else if (key == "model") cfg.model = value;
            else if (key == "gtr_file") cfg.gtr_file = value;
            else if (key == "k_r") cfg.k_r = conf_size(key, value);
            else if (key == "k_r_sweep") {
                cfg.k_r_sweep.clear();
                for (const auto& tok : split_commas(value))
                    cfg.k_r_sweep.push_back(conf_size(key, tok));
            }
            else if (key == "k0") cfg.k0 = conf_size(key, value);
            else if (key == "zeta") cfg.zeta = conf_double(key, value);
            else if (key == "eps_log") cfg.eps_log = conf_double(key, value);
            else if (key == "variant") cfg.variant = value;
            else if (key == "method") cfg.method = value;
            else if (key == "replicates") cfg.replicates = conf_size(key, value);
            else if (key == "min_success") cfg.min_success = conf_double(key, value);
            else if (key == "seed") { cfg.seed = conf_size(key, value); vcfg.seed = cfg.seed; }
            else if (key == "threads") {
                cfg.threads = static_cast<int>(conf_size(key, value));
                vcfg.threads = cfg.threads;
            }
            else if (key == "reps_scale") vcfg.reps_scale = conf_double(key, value);
            else if (key == "only") vcfg.only = split_commas(value);
            else if (key == "replicate") replicate = conf_size(key, value);
            else if (key == "newick") newick_in = value;
            else if (key == "newick_out") newick_out = value;
            else if (key == "out") out_path = value;
            else if (key == "ancestry") ancestry_path = value;
            else if (key == "in") in_path = value;
            else if (key == "matrix") matrix_path = value;
            else if (key == "replicates_csv") replicates_csv = value;
            else if (key == "checks_csv") checks_csv = value;
            else throw std::runtime_error("config: unknown key '" + key + "'");
        }
    };
    try {
        for (int i = 1; i < argc; ++i) {
            const std::string arg = argv[i];
            if (arg == "--config" && i + 1 < argc) apply_config(argv[i + 1]);
            else if (arg.rfind("--config=", 0) == 0) apply_config(arg.substr(9));
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) return cmd_simulate(cfg, newick_in, out_path, ancestry_path, newick_out,
                                      replicate);
        if (*est) return cmd_estimate(cfg, in_path, out_path);
        if (*rec) return cmd_reconstruct(cfg, matrix_path, out_path, print_support);
        if (*val) return write_report(validate_analytics(vcfg), "", checks_csv);
        if (*exp) return write_report(run_experiment(cfg), replicates_csv, checks_csv);
    } catch (const NewickError& ex) {
        std::cerr << "error: " << ex.what() << " (offset " << ex.offset() << ")\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 2;
}
