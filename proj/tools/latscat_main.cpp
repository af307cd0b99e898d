#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <thread>

#include "latscat/equivalence.hpp"
#include "latscat/reconstruction.hpp"
#include "latscat/serialization.hpp"
#include "latscat/torus_geometry.hpp"

namespace fs = std::filesystem;
using namespace latscat;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitGate = 3;
constexpr int kExitExceptional = 4;

struct Cli {
    std::string config_path;
    std::string out_dir = ".";
    std::string cache_dir;
    int threads = 0;
    double green_tol_override = 0.0;
    bool csv = false;
};

RunConfig load_config(const Cli& cli) {
    json j = cli.config_path.empty() ? json::object() : load_json_file(cli.config_path);
    RunConfig c = RunConfig::from_json(j);
    if (cli.green_tol_override > 0.0) c.green_tolerance = cli.green_tol_override;
    if (cli.threads > 0) c.threads = cli.threads;
    return c;
}

json meta_for(const RunConfig& cfg) {
    return json{{"tool", kToolVersion}, {"config_hash", cfg.hash()}, {"seed", cfg.seed}};
}

std::string cache_key(const RunConfig& cfg, const FreeResolvent& r0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "green_d%d_lam%.12g_%s_%s_tol%.3g.json", cfg.d, cfg.lambda,
                  cfg.sign == LimitSign::Plus ? "p" : "m", to_string(r0.method()).c_str(),
                  r0.tolerance());
    return buf;
}

// Loads a matching cached table (verified by the kernel identity) into the
// evaluator; returns the cache file path, empty when caching is off.
std::string try_preload(const Cli& cli, const RunConfig& cfg, FreeResolvent& r0) {
    if (cli.cache_dir.empty()) return {};
    fs::create_directories(cli.cache_dir);
    const std::string path = (fs::path(cli.cache_dir) / cache_key(cfg, r0)).string();
    if (fs::exists(path)) {
        try {
            const GreenTable t = green_table_from_json(load_json_file(path));
            const double defect = r0_defect(t);
            if (defect <= 50.0 * std::max(t.accuracy, 1e-14)) {
                r0.preload(t);
            } else {
                std::cerr << "cache: rejecting " << path << " (defect " << defect << ")\n";
            }
        } catch (const std::exception& e) {
            std::cerr << "cache: ignoring " << path << " (" << e.what() << ")\n";
        }
    }
    return path;
}

void save_cache(const std::string& path, const FreeResolvent& r0) {
    if (path.empty()) return;
    write_json_file(path, green_table_to_json(r0.snapshot()));
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXcd& m) {
    std::ofstream out(path);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            out << m(r, c).real() << ';' << m(r, c).imag();
        }
        out << '\n';
    }
}

int cmd_forward(const Cli& cli) {
    const RunConfig cfg = load_config(cli);
    const SpectralParam sp = cfg.spectral();
    sp.require_low_band("forward");
    const Potential V = cfg.make_potential();
    FreeResolvent r0(sp, cfg.green_tolerance, cfg.green_method);
    const std::string cache_path = try_preload(cli, cfg, r0);
    const AngularGrid grid(sp, cfg.n_theta);
    if (grid.size() < 4 * RectDomain(cfg.d, cfg.M).num_boundary())
        std::cerr << "warning: n_theta below 4x the boundary size; the downstream "
                     "D-N recovery may be poorly conditioned\n";

    const OperatorMatrix A = amplitude(V, r0, grid);
    const OperatorMatrix S = s_matrix(A, grid);
    const double defect = unitarity_defect(S, grid);

    fs::create_directories(cli.out_dir);
    json meta = meta_for(cfg);
    meta["gates"] = json{{"unitarity_defect", defect}, {"unitarity_threshold", 1e-4}};
    json a_json = operator_matrix_to_json(A);
    a_json["meta"] = meta;
    a_json["d"] = cfg.d;
    a_json["M"] = cfg.M;
    a_json["n_theta"] = grid.size();
    json s_json = operator_matrix_to_json(S);
    s_json["meta"] = meta;
    write_json_file((fs::path(cli.out_dir) / "amplitude.json").string(), a_json);
    write_json_file((fs::path(cli.out_dir) / "smatrix.json").string(), s_json);
    if (cli.csv) {
        write_matrix_csv((fs::path(cli.out_dir) / "amplitude.csv").string(), A.mat);
        write_matrix_csv((fs::path(cli.out_dir) / "smatrix.csv").string(), S.mat);
    }
    save_cache(cache_path, r0);
    std::cout << "unitarity defect " << defect << "\n";
    return defect <= 1e-4 ? kExitOk : kExitGate;
}

int cmd_dnmap(const Cli& cli) {
    const RunConfig cfg = load_config(cli);
    const RectDomain domain(cfg.d, cfg.M);
    const Potential V = cfg.make_potential();
    const BoundaryOperator lam = interior_dn(domain, V, cfg.lambda);

    const double sym = (lam.mat - lam.mat.transpose()).norm() / std::max(1.0, lam.mat.norm());
    json j = boundary_operator_to_json(lam, cfg.d, cfg.M);
    j["meta"] = meta_for(cfg);
    j["meta"]["gates"] = json{{"symmetry_defect", sym}, {"symmetry_threshold", 1e-12}};
    fs::create_directories(cli.out_dir);
    write_json_file((fs::path(cli.out_dir) / "dnmap.json").string(), j);
    if (cli.csv) write_matrix_csv((fs::path(cli.out_dir) / "dnmap.csv").string(), lam.mat);
    std::cout << "dn map symmetry defect " << sym << "\n";
    return sym <= 1e-12 ? kExitOk : kExitGate;
}

int cmd_invert_dn(const Cli& cli, const std::string& dn_path) {
    const RunConfig cfg = load_config(cli);
    int d = 0, M = 0;
    const BoundaryOperator lam = boundary_operator_from_json(load_json_file(dn_path), &d, &M);
    const RectDomain domain(d, M);
    if (lam.vertices != domain.boundary())
        throw validation_error("invert-dn: vertex order in file does not match the domain");
    const double imag_norm = lam.mat.imag().norm();
    if (imag_norm > 1e-6 * std::max(1.0, lam.mat.norm()))
        throw numerical_error("invert-dn: D-N matrix has a non-negligible imaginary part");

    const ReconstructionReport rep = reconstruct(lam.mat.real(), lam.lambda, d, M);
    json out = potential_to_json(rep.potential);
    out["meta"] = meta_for(cfg);
    out["meta"]["gates"] =
        json{{"neumann_residual", rep.max_neumann_residual},
             {"pattern_residual", rep.max_pattern_residual},
             {"pattern_threshold", 1e-6}};
    fs::create_directories(cli.out_dir);
    write_json_file((fs::path(cli.out_dir) / "potential.json").string(), out);
    std::cout << "reconstruction pattern residual " << rep.max_pattern_residual << "\n";
    return rep.max_pattern_residual <= 1e-6 ? kExitOk : kExitGate;
}

int cmd_invert_smatrix(const Cli& cli, const std::string& amp_path) {
    const RunConfig cfg = load_config(cli);
    const json aj = load_json_file(amp_path);
    const OperatorMatrix A = operator_matrix_from_json(aj);
    const int d = aj.value("d", cfg.d);
    const int M = aj.value("M", cfg.M);
    const RectDomain domain(d, M);
    const SpectralParam sp(A.lambda, d, LimitSign::Plus);
    sp.require_low_band("invert-smatrix");

    FreeResolvent r0(sp, cfg.green_tolerance, cfg.green_method);
    const std::string cache_path = try_preload(cli, cfg, r0);
    const AngularGrid grid(sp, static_cast<int>(A.mat.rows()));
    if (grid.size() != A.mat.rows())
        throw validation_error("invert-smatrix: amplitude size is not a valid grid size");

    const DnRecovery rec = smatrix_to_dn(A, domain, grid, r0);
    const ReconstructionReport rep = reconstruct(rec.lambda_v.mat.real(), A.lambda, d, M);

    json out = potential_to_json(rep.potential);
    out["meta"] = meta_for(cfg);
    out["meta"]["gates"] = json{{"gamma_rank_ratio", rec.gamma_rank_ratio},
                                {"gram_condition", rec.gram_condition},
                                {"dn_symmetry_defect", rec.symmetry_defect},
                                {"dn_imag_fraction", rec.imag_fraction},
                                {"pattern_residual", rep.max_pattern_residual}};
    fs::create_directories(cli.out_dir);
    write_json_file((fs::path(cli.out_dir) / "potential.json").string(), out);
    save_cache(cache_path, r0);
    std::cout << "recovered dn symmetry defect " << rec.symmetry_defect << ", pattern residual "
              << rep.max_pattern_residual << "\n";
    return rec.symmetry_defect <= 1e-3 ? kExitOk : kExitGate;
}

int cmd_green(const Cli& cli, int max_radius) {
    const RunConfig cfg = load_config(cli);
    const SpectralParam sp = cfg.spectral();
    sp.require_low_band("green");
    FreeResolvent r0(sp, cfg.green_tolerance, cfg.green_method);
    const std::string cache_path = try_preload(cli, cfg, r0);

    // Offsets come from the config when given explicitly, otherwise the
    // Euclidean ball of the requested radius.
    std::vector<LatticePoint> offsets;
    if (cfg.raw.contains("green") && cfg.raw.at("green").contains("offsets")) {
        for (const auto& e : cfg.raw.at("green").at("offsets"))
            offsets.emplace_back(e.get<std::vector<int>>());
    } else {
        std::vector<int> cur(static_cast<std::size_t>(cfg.d), -max_radius);
        while (true) {
            LatticePoint k(cur);
            if (k.norm() <= double(max_radius) + 1e-9) offsets.push_back(k);
            int t = 0;
            for (; t < cfg.d; ++t) {
                if (++cur[static_cast<std::size_t>(t)] <= max_radius) break;
                cur[static_cast<std::size_t>(t)] = -max_radius;
            }
            if (t == cfg.d) break;
        }
    }

    // Offsets are independent; split them over per-thread evaluators and
    // merge.  The values do not depend on the partition.
    const int want = cfg.threads > 0 ? cfg.threads
                                     : int(std::max(1u, std::thread::hardware_concurrency()));
    const int workers = std::max(1, std::min<int>(want, int(offsets.size())));
    GreenTable table;
    if (workers == 1) {
        table = r0.table(offsets);
    } else {
        std::vector<GreenTable> parts(static_cast<std::size_t>(workers));
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w]() {
                FreeResolvent local(sp, cfg.green_tolerance, cfg.green_method);
                local.preload(r0.snapshot());
                std::vector<LatticePoint> mine;
                for (std::size_t i = static_cast<std::size_t>(w); i < offsets.size();
                     i += static_cast<std::size_t>(workers))
                    mine.push_back(offsets[i]);
                parts[static_cast<std::size_t>(w)] = local.table(mine);
            });
        for (auto& t : pool) t.join();
        table = parts[0];
        for (int w = 1; w < workers; ++w)
            table.values.insert(parts[static_cast<std::size_t>(w)].values.begin(),
                                parts[static_cast<std::size_t>(w)].values.end());
        r0.preload(table);
    }
    const double defect = r0_defect(table);
    const double threshold = cfg.d == 2 ? 1e-9 : 1e-4;
    json j = green_table_to_json(table);
    j["meta"] = meta_for(cfg);
    j["meta"]["gates"] = json{{"kernel_defect", defect}, {"kernel_threshold", threshold}};
    fs::create_directories(cli.out_dir);
    write_json_file((fs::path(cli.out_dir) / "green.json").string(), j);
    save_cache(cache_path, r0);
    std::cout << "green kernel defect " << defect << " over " << table.values.size()
              << " offsets\n";
    return defect <= threshold ? kExitOk : kExitGate;
}

int cmd_surface(const Cli& cli, int samples) {
    const RunConfig cfg = load_config(cli);
    const SpectralParam sp = cfg.spectral();
    const ConvexityReport rep = convexity_check(sp, samples, cfg.seed);

    json pts = json::array();
    for (const Vector& x : sample_surface(sp, std::min(samples, 2048), cfg.seed)) {
        json row = json::array();
        for (int j = 0; j < x.size(); ++j) row.push_back(x[j]);
        pts.push_back(std::move(row));
    }
    json j{{"format", "latscat-surface-v1"},
           {"tool", kToolVersion},
           {"d", cfg.d},
           {"lambda", cfg.lambda},
           {"convex", rep.convex},
           {"min_principal_curvature", rep.min_principal},
           {"max_principal_curvature", rep.max_principal},
           {"samples", rep.samples},
           {"points", std::move(pts)}};
    j["meta"] = meta_for(cfg);
    fs::create_directories(cli.out_dir);
    write_json_file((fs::path(cli.out_dir) / "surface.json").string(), j);
    std::cout << (rep.convex ? "convex" : "not convex") << ", min principal curvature "
              << rep.min_principal << "\n";
    return kExitOk;
}

int cmd_selftest(const Cli& cli) {
    const RunConfig cfg = load_config(cli);
    const SpectralParam sp = cfg.spectral();
    sp.require_low_band("selftest");
    const RectDomain domain(cfg.d, cfg.M);
    const Potential V = cfg.make_potential();
    FreeResolvent r0(sp, cfg.green_tolerance, cfg.green_method);
    const std::string cache_path = try_preload(cli, cfg, r0);
    FreeResolvent r0m(sp.conjugated(), cfg.green_tolerance, cfg.green_method);

    json gates = json::array();
    bool ok = true;
    auto gate = [&](const std::string& name, double value, double threshold) {
        const bool pass = value <= threshold;
        ok = ok && pass;
        gates.push_back(json{{"name", name}, {"value", value}, {"threshold", threshold},
                             {"pass", pass}});
        std::cout << (pass ? "PASS " : "FAIL ") << name << " = " << value << " (<= " << threshold
                  << ")\n";
    };

    // Green kernel identity.
    {
        std::vector<LatticePoint> offs;
        const int r = 3;
        std::vector<int> cur(static_cast<std::size_t>(cfg.d), -r - 1);
        while (true) {
            offs.emplace_back(cur);
            int t = 0;
            for (; t < cfg.d; ++t) {
                if (++cur[static_cast<std::size_t>(t)] <= r + 1) break;
                cur[static_cast<std::size_t>(t)] = -r - 1;
            }
            if (t == cfg.d) break;
        }
        gate("green.kernel_defect", r0_defect(r0.table(offs)), cfg.d == 2 ? 1e-9 : 1e-4);
    }

    // Interior D-N: Schur complement vs direct solve, symmetry.
    {
        const BoundaryOperator lam = interior_dn(domain, V, cfg.lambda);
        double col_err = 0.0;
        for (int b = 0; b < domain.num_boundary(); ++b) {
            GridFunction f;
            for (int c = 0; c < domain.num_boundary(); ++c)
                f.set(domain.boundary()[size_t(c)], c == b ? 1.0 : 0.0);
            const GridFunction u = dirichlet_solve(domain, V, cfg.lambda, f);
            const GridFunction dn = normal_derivative(domain, u);
            for (int rI = 0; rI < domain.num_boundary(); ++rI)
                col_err = std::max(col_err,
                                   std::abs(dn.at(domain.boundary()[size_t(rI)]) - lam.mat(rI, b)));
        }
        gate("dn.schur_vs_direct", col_err, 1e-10);
        gate("dn.symmetry", (lam.mat - lam.mat.transpose()).norm(), 1e-12);
    }

    // Single layer / boundary operator identities.
    {
        const BoundaryOperator m = single_layer(domain, V, r0);
        const BoundaryOperator b = boundary_op(domain, V, r0);
        const Eigen::MatrixXcd eye =
            Eigen::MatrixXcd::Identity(domain.num_boundary(), domain.num_boundary());
        gate("ops.m_times_b", (m.mat * b.mat - eye).norm(), 1e-8);
        const BoundaryOperator bm = boundary_op(domain, V, r0m);
        gate("ops.b_adjoint", (b.mat.adjoint() - bm.mat).norm(), 1e-8);
        const Potential zero(domain);
        const BoundaryOperator b0 = boundary_op(domain, zero, r0);
        const BoundaryOperator lam = interior_dn(domain, V, cfg.lambda);
        const BoundaryOperator lam0 = interior_dn(domain, zero, cfg.lambda);
        gate("ops.b_shift", ((b.mat - b0.mat) - (lam.mat - lam0.mat)).norm(), 1e-7);
    }

    // Scattering: unitarity + factorization.
    {
        const AngularGrid grid(sp, cfg.n_theta);
        const OperatorMatrix A = amplitude(V, r0, grid);
        gate("scatter.unitarity", unitarity_defect(s_matrix(A, grid), grid), 1e-4);
        gate("scatter.factorization", factorization_defect(domain, V, r0, grid), 1e-3);
        const DnRecovery rec = smatrix_to_dn(A, domain, grid, r0);
        const BoundaryOperator lam = interior_dn(domain, V, cfg.lambda);
        gate("invert.dn_roundtrip",
             (rec.lambda_v.mat - lam.mat).norm() / lam.mat.norm(), 1e-3);
        const ReconstructionReport rep = reconstruct(rec.lambda_v.mat.real(), cfg.lambda, cfg.d, cfg.M);
        double verr = 0.0;
        for (const auto& n : domain.interior())
            verr = std::max(verr, std::abs(rep.potential.at(n) - V.at(n)));
        gate("invert.end_to_end", verr, 1e-3);
    }

    json report{{"format", "latscat-selftest-v1"}, {"tool", kToolVersion}, {"gates", gates},
                {"pass", ok}};
    report["meta"] = meta_for(cfg);
    fs::create_directories(cli.out_dir);
    write_json_file((fs::path(cli.out_dir) / "selftest.json").string(), report);
    save_cache(cache_path, r0);
    return ok ? kExitOk : kExitGate;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete Schroedinger fixed-energy scattering toolkit"};
    app.require_subcommand(1);

    Cli cli;
    app.add_option("--config", cli.config_path, "JSON run configuration");
    app.add_option("--out", cli.out_dir, "output directory");
    app.add_option("--cache", cli.cache_dir, "green-table cache directory");
    app.add_option("--threads", cli.threads, "worker threads (0 = auto)");
    app.add_option("--green-tol", cli.green_tol_override, "override green tolerance");
    app.add_flag("--csv", cli.csv, "also export matrices as CSV");

    auto* forward = app.add_subcommand("forward", "potential -> amplitude and S-matrix");
    auto* dnmap = app.add_subcommand("dnmap", "potential -> interior D-N map");
    auto* invert_dn = app.add_subcommand("invert-dn", "D-N map file -> potential");
    std::string dn_path;
    invert_dn->add_option("dnmap", dn_path, "dnmap.json produced by 'dnmap'")->required();
    auto* invert_s = app.add_subcommand("invert-smatrix", "amplitude file -> potential");
    std::string amp_path;
    invert_s->add_option("amplitude", amp_path, "amplitude.json produced by 'forward'")->required();
    auto* green = app.add_subcommand("green", "tabulate the free resolvent kernel");
    int max_radius = 6;
    green->add_option("--max-radius", max_radius, "tabulate offsets with |k| <= R");
    auto* surface = app.add_subcommand("surface", "energy surface samples and curvature report");
    int samples = 2000;
    surface->add_option("--samples", samples, "number of surface samples");
    auto* selftest = app.add_subcommand("selftest", "run the invariant gates for a configuration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (forward->parsed()) return cmd_forward(cli);
        if (dnmap->parsed()) return cmd_dnmap(cli);
        if (invert_dn->parsed()) return cmd_invert_dn(cli, dn_path);
        if (invert_s->parsed()) return cmd_invert_smatrix(cli, amp_path);
        if (green->parsed()) return cmd_green(cli, max_radius);
        if (surface->parsed()) return cmd_surface(cli, samples);
        if (selftest->parsed()) return cmd_selftest(cli);
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const exceptional_energy_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitExceptional;
    } catch (const numerical_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGate;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}
