// Command-line front end: solve (eigenfrequencies of an interval), sweep
// (smallest-singular-value tables), converge (determinant/root convergence in
// N), modes (eigenfunction grids/images), shapes (built-in catalogue), and
// selftest (CLI defaults vs library constants). Outputs are deterministic:
// two runs with identical flags differ at most in the timing field.

#include <drumeig/drumeig.hpp>

#include <CLI11.hpp>
#include <json.hpp>
#include <zlib.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

using namespace drumeig;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Exit codes (scriptability contract):
//   0 success, 1 malformed shape / usage, 2 no-convergence or
//   not-an-eigenfrequency, 3 eigenvalue-count audit warning (results written).
constexpr int exit_ok = 0;
constexpr int exit_bad_shape = 1;
constexpr int exit_no_convergence = 2;
constexpr int exit_weyl_warning = 3;

// ---------------------------------------------------------------------------
// Shape resolution: built-in name, inline JSON, or a path to a JSON file.

json shape_spec_from_arg(const std::string& arg) {
    for (const auto& [name, spec] : builtin_shape_specs())
        if (name == arg) return spec;
    const std::size_t first = arg.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && arg[first] == '{') {
        try {
            return json::parse(arg);
        } catch (const json::exception& e) {
            throw ShapeError(std::string("shape spec: invalid JSON: ") + e.what());
        }
    }
    std::ifstream in(arg, std::ios::binary);
    if (!in) throw ShapeError("shape spec: no built-in named \"" + arg + "\" and no such file");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::exception& e) {
        throw ShapeError(std::string("shape spec: invalid JSON in file \"") + arg + "\": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Option plumbing shared by the compute subcommands.

struct CommonArgs {
    std::string shape = "disk";
    std::string eta = "kappa";
    std::string n_rule;
    // Literal defaults, cross-checked against the library constants by selftest.
    double beta = 0.0;
    double close_root_s = 1e-3;
    int threads = 0;
    std::string out = "-";
};

void add_common(CLI::App* cmd, CommonArgs& c, bool with_eta = true) {
    cmd->add_option("--shape", c.shape,
                    "Built-in name, inline JSON spec, or path to a spec file");
    if (with_eta)
        cmd->add_option("--eta", c.eta,
                        "Coupling: 'kappa' (combined field), '0' (double layer only), or a value");
    cmd->add_option("--n-rule", c.n_rule, "Override node-count rule, e.g. \"max(150,100+5*kappa)\"");
    cmd->add_option("--beta", c.beta, "Root-residual acceptance tolerance (0 = automatic)");
    cmd->add_option("--close-root-s", c.close_root_s, "Close-root window threshold s");
    cmd->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
    cmd->add_option("--out", c.out, "Output path ('-' = stdout)");
}

// Parses "max(A,B+C*kappa)" into a node-count rule (rounded up to even).
std::function<int(double)> parse_n_rule(const std::string& text) {
    static const std::regex rule_re(
        R"(^\s*max\(\s*([0-9.eE+\-]+)\s*,\s*([0-9.eE+\-]+)\s*\+\s*([0-9.eE+\-]+)\s*\*\s*kappa\s*\)\s*$)");
    std::smatch m;
    if (!std::regex_match(text, m, rule_re))
        throw std::invalid_argument("--n-rule must have the form max(A,B+C*kappa)");
    const double A = std::stod(m[1]), B = std::stod(m[2]), C = std::stod(m[3]);
    return [A, B, C](double kappa) {
        int n = static_cast<int>(std::ceil(std::max(A, B + C * kappa)));
        if (n % 2 != 0) ++n;
        return n;
    };
}

// Representation + dependent fields of SolveOptions from the common flags.
SolveOptions make_options(const CommonArgs& c) {
    SolveOptions o;
    if (c.eta == "kappa") {
        o.representation = Representation::cfie;
    } else {
        std::size_t pos = 0;
        double v = 0.0;
        bool numeric = false;
        try {
            v = std::stod(c.eta, &pos);
            numeric = pos == c.eta.size();
        } catch (const std::exception&) {
            numeric = false;
        }
        if (!numeric) throw std::invalid_argument("--eta must be 'kappa', '0', or a number");
        if (v == 0.0) {
            o.representation = Representation::dlp;
        } else {
            o.representation = Representation::custom;
            o.custom_eta = v;
        }
    }
    if (!c.n_rule.empty()) o.N_rule = parse_n_rule(c.n_rule);
    o.beta_max = c.beta;
    o.close_root_threshold = c.close_root_s;
    return o;
}

std::string representation_name(const SolveOptions& o) {
    switch (o.representation) {
    case Representation::cfie: return "cfie";
    case Representation::dlp: return "dlp";
    default: return "custom";
    }
}

void apply_threads(int n) {
    if (n > 0) set_thread_count(n);
}

int write_text(const std::string& out, const std::string& text) {
    if (out == "-") {
        std::cout << text;
        return exit_ok;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot open output path \"" << out << "\"\n";
        return exit_bad_shape;
    }
    f << text;
    return exit_ok;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Minimal PNG writer (8-bit RGB, zlib-compressed, filter 0 on every row).

void png_chunk(std::string& out, const char type[4], const std::string& data) {
    auto be32 = [](std::uint32_t v) {
        char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                     static_cast<char>(v >> 8), static_cast<char>(v)};
        return std::string(b, 4);
    };
    out += be32(static_cast<std::uint32_t>(data.size()));
    std::string block(type, 4);
    block += data;
    out += block;
    const auto crc =
        crc32(0L, reinterpret_cast<const Bytef*>(block.data()), static_cast<uInt>(block.size()));
    out += be32(static_cast<std::uint32_t>(crc));
}

std::string encode_png(int w, int h, const std::vector<std::uint8_t>& rgb) {
    std::string raw;
    raw.reserve(static_cast<std::size_t>(h) * (3 * w + 1));
    for (int y = 0; y < h; ++y) {
        raw.push_back('\0'); // filter type 0
        raw.append(reinterpret_cast<const char*>(rgb.data()) + static_cast<std::size_t>(y) * 3 * w,
                   static_cast<std::size_t>(3) * w);
    }
    uLongf zlen = compressBound(static_cast<uLong>(raw.size()));
    std::vector<Bytef> z(zlen);
    if (compress2(z.data(), &zlen, reinterpret_cast<const Bytef*>(raw.data()),
                  static_cast<uLong>(raw.size()), 9) != Z_OK)
        throw std::runtime_error("png: compression failed");

    std::string out("\x89PNG\r\n\x1a\n", 8);
    std::string ihdr;
    auto be32 = [&ihdr](std::uint32_t v) {
        ihdr += static_cast<char>(v >> 24);
        ihdr += static_cast<char>(v >> 16);
        ihdr += static_cast<char>(v >> 8);
        ihdr += static_cast<char>(v);
    };
    be32(static_cast<std::uint32_t>(w));
    be32(static_cast<std::uint32_t>(h));
    ihdr += '\x08'; // bit depth
    ihdr += '\x02'; // truecolor
    ihdr += '\x00';
    ihdr += '\x00';
    ihdr += '\x00';
    png_chunk(out, "IHDR", ihdr);
    png_chunk(out, "IDAT", std::string(reinterpret_cast<char*>(z.data()), zlen));
    png_chunk(out, "IEND", "");
    return out;
}

// Diverging blue-white-red rendering of a mode grid; masked cells in gray.
std::string render_mode_png(const ModeGrid& g) {
    double vmax = 0.0;
    for (double v : g.values) vmax = std::max(vmax, std::abs(v));
    if (vmax == 0.0) vmax = 1.0;
    std::vector<std::uint8_t> rgb(static_cast<std::size_t>(g.nx) * g.ny * 3, 0);
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            // Image rows run top-down; the grid's y axis runs bottom-up.
            const std::size_t src = static_cast<std::size_t>(iy) * g.nx + ix;
            const std::size_t dst =
                (static_cast<std::size_t>(g.ny - 1 - iy) * g.nx + ix) * 3;
            std::uint8_t r = 190, gg = 190, b = 190; // outside
            if (g.mask[src] == mode_mask_near_boundary) {
                r = gg = b = 150;
            } else if (g.mask[src] == mode_mask_interior) {
                const double t = g.values[src] / vmax; // [-1, 1]
                if (t >= 0.0) {
                    r = 255;
                    gg = static_cast<std::uint8_t>(std::lround(255 * (1.0 - t)));
                    b = gg;
                } else {
                    b = 255;
                    gg = static_cast<std::uint8_t>(std::lround(255 * (1.0 + t)));
                    r = gg;
                }
            }
            rgb[dst] = r;
            rgb[dst + 1] = gg;
            rgb[dst + 2] = b;
        }
    }
    return encode_png(g.nx, g.ny, rgb);
}

// ---------------------------------------------------------------------------
// Mode grid serializations.

std::string mode_grid_binary(const ModeGrid& g) {
    std::string out("DRGRID01", 8);
    auto put_i32 = [&out](std::int32_t v) { out.append(reinterpret_cast<const char*>(&v), 4); };
    auto put_f64 = [&out](double v) { out.append(reinterpret_cast<const char*>(&v), 8); };
    put_i32(g.nx);
    put_i32(g.ny);
    put_f64(g.bbox.xlo);
    put_f64(g.bbox.xhi);
    put_f64(g.bbox.ylo);
    put_f64(g.bbox.yhi);
    put_f64(g.kappa);
    put_f64(g.norm_constant);
    out.append(reinterpret_cast<const char*>(g.mask.data()), g.mask.size());
    out.append(reinterpret_cast<const char*>(g.values.data()), g.values.size() * sizeof(double));
    return out;
}

std::string mode_grid_csv(const ModeGrid& g) {
    std::string out = "x,y,mask,value\n";
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            const std::size_t i = static_cast<std::size_t>(iy) * g.nx + ix;
            out += fmt17(g.bbox.xlo + ix * g.dx);
            out += ',';
            out += fmt17(g.bbox.ylo + iy * g.dy);
            out += ',';
            out += std::to_string(static_cast<int>(g.mask[i]));
            out += ',';
            out += fmt17(g.values[i]);
            out += '\n';
        }
    return out;
}

json mode_grid_json(const ModeGrid& g) {
    json j;
    j["kappa"] = g.kappa;
    j["nx"] = g.nx;
    j["ny"] = g.ny;
    j["bbox"] = {g.bbox.xlo, g.bbox.xhi, g.bbox.ylo, g.bbox.yhi};
    j["norm_constant"] = g.norm_constant;
    j["mask"] = g.mask;
    j["values"] = g.values;
    return j;
}

// ---------------------------------------------------------------------------
// solve

int cmd_solve(const CommonArgs& c, double a, double b) {
    json spec;
    Boundary bnd;
    try {
        spec = shape_spec_from_arg(c.shape);
        bnd = boundary_from_spec(spec);
    } catch (const ShapeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_bad_shape;
    }
    SolveOptions opts;
    try {
        opts = make_options(c);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_bad_shape;
    }
    apply_threads(c.threads);

    SolveOutcome out;
    try {
        out = solve_interval(bnd, a, b, opts);
    } catch (const NoConvergenceError& e) {
        std::cerr << "error: " << e.what() << " [" << fmt17(e.interval_lo) << ", "
                  << fmt17(e.interval_hi) << "], degree " << e.last_degree << ", decay "
                  << fmt17(e.last_decay) << "\n";
        return exit_no_convergence;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_bad_shape;
    }

    json doc;
    doc["domain"] = spec;
    doc["interval"] = {a, b};
    doc["representation"] = representation_name(opts);
    doc["eigenfrequencies"] = json::array();
    for (const auto& e : out.eigenfrequencies) {
        json r;
        r["kappa"] = e.kappa;
        r["beta"] = e.beta;
        r["method"] = e.method;
        r["N"] = e.N_used;
        r["err_est"] = e.err_est;
        r["err_est_up_to_constant"] = e.err_est_up_to_constant;
        r["spurious"] = e.spurious;
        doc["eigenfrequencies"].push_back(r);
    }
    doc["weyl"] = {{"expected", out.weyl.expected}, {"found", out.weyl.found}};
    doc["timing_seconds"] = out.timing_seconds;
    doc["determinant_evaluations"] = out.determinant_evaluations;
    doc["sigma_evaluations"] = out.sigma_evaluations;

    const int wr = write_text(c.out, doc.dump(2) + "\n");
    if (wr != exit_ok) return wr;
    if (out.weyl.audited && out.weyl.warning) {
        std::cerr << "warning: eigenvalue count " << out.weyl.found
                  << " deviates from the Weyl estimate " << fmt17(out.weyl.expected) << "\n";
        return exit_weyl_warning;
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------
// sweep: CSV of kappa, sigma_min(dlp), sigma_min(cfie)

int cmd_sweep(const CommonArgs& c, double a, double b, int samples) {
    Boundary bnd;
    try {
        bnd = boundary_from_spec(shape_spec_from_arg(c.shape));
    } catch (const ShapeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_bad_shape;
    }
    apply_threads(c.threads);
    SolveOptions dlp_opts, cfie_opts;
    dlp_opts.representation = Representation::dlp;
    cfie_opts.representation = Representation::cfie;
    if (!c.n_rule.empty()) {
        try {
            dlp_opts.N_rule = cfie_opts.N_rule = parse_n_rule(c.n_rule);
        } catch (const std::invalid_argument& e) {
            std::cerr << "error: " << e.what() << "\n";
            return exit_bad_shape;
        }
    }
    std::vector<std::pair<double, double>> sd, sc;
    try {
        sd = sweep_sigma_min(bnd, a, b, samples, dlp_opts);
        sc = sweep_sigma_min(bnd, a, b, samples, cfie_opts);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_bad_shape;
    }
    std::string csv = "kappa,sigma_min_dlp,sigma_min_cfie\n";
    for (std::size_t i = 0; i < sd.size(); ++i) {
        csv += fmt17(sd[i].first);
        csv += ',';
        csv += fmt17(sd[i].second);
        csv += ',';
        csv += fmt17(sc[i].second);
        csv += '\n';
    }
    return write_text(c.out, csv);
}

// ---------------------------------------------------------------------------
// converge: CSV of N, |f_N(kappa)|, root_N (from a small bracketing interval)

int cmd_converge(const CommonArgs& c, double kappa, std::vector<int> n_list, double half_width) {
    Boundary bnd;
    try {
        bnd = boundary_from_spec(shape_spec_from_arg(c.shape));
    } catch (const ShapeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_bad_shape;
    }
    if (n_list.empty()) {
        std::cerr << "error: --N requires at least one value\n";
        return exit_bad_shape;
    }
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 8 || n_list[i] % 2 != 0) {
            std::cerr << "error: --N values must be even and >= 8\n";
            return exit_bad_shape;
        }
        if (i > 0 && n_list[i] <= n_list[i - 1]) {
            std::cerr << "error: --N values must be ascending\n";
            return exit_bad_shape;
        }
    }
    SolveOptions opts;
    try {
        opts = make_options(c);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_bad_shape;
    }
    apply_threads(c.threads);

    std::string csv = "N,abs_fN,root_N\n";
    for (int N : n_list) {
        const DiscreteBoundary d = discretize(bnd, N);
        const double eta = detail::eta_of(opts, kappa);
        const ScaledDeterminant det = scaled_determinant(assemble(d, kappa, eta).A);
        const double absf = det.is_zero() ? 0.0 : std::pow(10.0, det.log10_abs());

        double root = std::numeric_limits<double>::quiet_NaN();
        try {
            BoydOptions bo;
            if (opts.beta_max > 0.0) bo.beta_max = opts.beta_max;
            const RootSet rs = boyd_find_roots(
                [&](double k) -> ScaledDeterminant {
                    return scaled_determinant(assemble(d, k, detail::eta_of(opts, k)).A);
                },
                kappa - half_width, kappa + half_width, bo);
            double best = std::numeric_limits<double>::infinity();
            for (const auto& r : rs.roots)
                if (std::abs(r.kappa - kappa) < best) {
                    best = std::abs(r.kappa - kappa);
                    root = r.kappa;
                }
        } catch (const NoConvergenceError&) {
            // leave NaN: no certified root at this N
        }
        csv += std::to_string(N);
        csv += ',';
        csv += fmt17(absf);
        csv += ',';
        csv += fmt17(root);
        csv += '\n';
    }
    return write_text(c.out, csv);
}

// ---------------------------------------------------------------------------
// modes

int cmd_modes(const CommonArgs& c, std::vector<double> kappas, std::vector<double> interval,
              int nx, int ny, const std::string& format) {
    Boundary bnd;
    try {
        bnd = boundary_from_spec(shape_spec_from_arg(c.shape));
    } catch (const ShapeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_bad_shape;
    }
    SolveOptions opts;
    try {
        opts = make_options(c);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_bad_shape;
    }
    apply_threads(c.threads);

    if (kappas.empty()) {
        if (interval.size() != 2) {
            std::cerr << "error: modes needs --kappa values or --interval a b\n";
            return exit_bad_shape;
        }
        SolveOptions sopts = opts;
        sopts.compute_error_estimates = false;
        SolveOutcome out;
        try {
            out = solve_interval(bnd, interval[0], interval[1], sopts);
        } catch (const NoConvergenceError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return exit_no_convergence;
        } catch (const std::invalid_argument& e) {
            std::cerr << "error: " << e.what() << "\n";
            return exit_bad_shape;
        }
        for (const auto& e : out.eigenfrequencies)
            if (!e.spurious) kappas.push_back(e.kappa);
        if (kappas.empty()) {
            std::cerr << "error: no eigenfrequencies in [" << fmt17(interval[0]) << ", "
                      << fmt17(interval[1]) << "]\n";
            return exit_no_convergence;
        }
    }

    const std::string prefix = c.out == "-" ? "mode" : c.out;
    for (std::size_t idx = 0; idx < kappas.size(); ++idx) {
        const double kappa = kappas[idx];
        const int N = opts.N_rule ? opts.N_rule(kappa) : default_N_rule(bnd, kappa);
        const DiscreteBoundary d = discretize(bnd, N);
        ModeGrid g;
        try {
            const BoundaryDensity bd = boundary_density(d, kappa);
            g = evaluate_mode(d, bd.density, kappa, nx, ny);
        } catch (const NotAnEigenfrequencyError& e) {
            std::cerr << "error: " << e.what() << " (kappa = " << fmt17(e.kappa)
                      << ", sigma_min = " << fmt17(e.sigma_min) << ")\n";
            return exit_no_convergence;
        }
        char suffix[32];
        std::snprintf(suffix, sizeof suffix, "_%03d", static_cast<int>(idx));
        std::string path = prefix + suffix;
        std::string payload;
        if (format == "png") {
            path += ".png";
            payload = render_mode_png(g);
        } else if (format == "csv") {
            path += ".csv";
            payload = mode_grid_csv(g);
        } else if (format == "json") {
            path += ".json";
            payload = mode_grid_json(g).dump(2) + "\n";
        } else if (format == "grid") {
            path += ".grid";
            payload = mode_grid_binary(g);
        } else {
            std::cerr << "error: --format must be one of json, csv, grid, png\n";
            return exit_bad_shape;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot open output path \"" << path << "\"\n";
            return exit_bad_shape;
        }
        f << payload;
        std::cout << path << " kappa=" << fmt17(kappa) << "\n";
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------
// shapes

int cmd_shapes(bool as_json) {
    if (as_json) {
        json doc = json::object();
        for (const auto& [name, spec] : builtin_shape_specs()) doc[name] = spec;
        std::cout << doc.dump(2) << "\n";
        return exit_ok;
    }
    std::cout << "Built-in shapes (use with --shape <name>):\n";
    for (const auto& [name, spec] : builtin_shape_specs())
        std::cout << "  " << name << "\n    spec: " << spec.dump() << "\n";
    std::cout << "Custom shapes: pass inline JSON or a file with the same grammar.\n"
                 "  {\"type\":\"disk\",\"radius\":R}\n"
                 "  {\"type\":\"radial\",\"a0\":A,\"cos\":[...],\"sin\":[...]}\n"
                 "  {\"type\":\"ellipse\",\"a\":A,\"b\":B}\n"
                 "  {\"type\":\"crescent\"}\n"
                 "  {\"type\":\"annulus\",\"outer\":<curve>,\"inner\":<curve>}\n";
    return exit_ok;
}

// ---------------------------------------------------------------------------
// selftest: CLI defaults must equal the library's constants, and the shape
// catalogue must round-trip.

int cmd_selftest() {
    int failures = 0;
    auto check = [&failures](bool ok, const std::string& what) {
        std::cout << (ok ? "  ok: " : "  FAIL: ") << what << "\n";
        if (!ok) ++failures;
    };

    const SolveOptions lib{};
    const CommonArgs cli{};
    check(cli.beta == lib.beta_max, "--beta default equals the solver's beta_max");
    check(cli.close_root_s == lib.close_root_threshold,
          "--close-root-s default equals the solver's close-root threshold");
    check(cli.eta == "kappa" && lib.representation == Representation::cfie,
          "--eta default 'kappa' equals the solver's combined-field default");
    check(cli.n_rule.empty(), "--n-rule default defers to the library rule");

    const Boundary disk = builtin_shape("disk");
    check(default_N_rule(disk, 2.0) == 150, "node rule floor (generic shapes)");
    check(default_N_rule(builtin_shape("crescent"), 2.0) == 350, "node rule floor (crescent)");
    check(default_N_rule(disk, 30.0) == 250, "node rule slope (generic shapes)");

    const SolveOptions defaults{};
    check(defaults.svd_tol == 1e-5, "sigma gate for SVD-path roots");
    check(defaults.det_accept_sigma == 1e-8, "sigma gate for determinant roots");
    check(defaults.svd_refine_tol == 1e-11, "SVD refinement tolerance");
    check(defaults.window_width_min == 0.25, "minimum window width");
    check(defaults.window_mean_gaps == 10.0, "window width in mean gaps");
    check(defaults.interior_grid_n == 200, "interior quadrature resolution");
    check(BoydOptions{}.coeff_decay_tol == 1e-12, "Chebyshev decay tolerance");
    check(BoydOptions{}.beta_max == 1e-14, "root-residual tolerance");

    bool round_trip = true;
    try {
        for (const auto& [name, spec] : builtin_shape_specs()) {
            const Boundary b = boundary_from_spec(spec);
            round_trip = round_trip && !b.shape_name.empty();
            (void)discretize(b, 64);
        }
    } catch (const std::exception&) {
        round_trip = false;
    }
    check(round_trip, "built-in shape specs parse and discretize");

    if (failures == 0) {
        std::cout << "selftest: ok\n";
        return exit_ok;
    }
    std::cout << "selftest: " << failures << " failure(s)\n";
    return exit_bad_shape;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dirichlet eigenfrequencies of smooth 2D drums via boundary integrals"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "Find eigenfrequencies in an interval");
    CommonArgs sc;
    std::vector<double> s_interval;
    add_common(solve, sc);
    solve->add_option("--interval", s_interval, "Search interval a b (0 < a < b)")
        ->expected(2)
        ->required();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Tabulate smallest singular values over an interval");
    CommonArgs wc;
    std::vector<double> w_interval;
    int w_samples = 100;
    add_common(sweep, wc, /*with_eta=*/false);
    sweep->add_option("--interval", w_interval, "Sample interval a b")->expected(2)->required();
    sweep->add_option("--samples", w_samples, "Number of sample points (>= 2)");

    // converge
    auto* conv = app.add_subcommand("converge", "Determinant and root convergence in N");
    CommonArgs cc;
    double c_kappa = 0.0;
    std::vector<int> c_nlist;
    double c_halfwidth = 0.05;
    add_common(conv, cc);
    conv->add_option("--kappa", c_kappa, "Frequency under study")->required();
    conv->add_option("--N", c_nlist, "Node counts, even and ascending")->required();
    conv->add_option("--half-width", c_halfwidth, "Root bracketing half-width around kappa");

    // modes
    auto* modes = app.add_subcommand("modes", "Evaluate eigenmodes on a grid");
    CommonArgs mc;
    std::vector<double> m_kappas, m_interval;
    std::vector<int> m_grid{200, 200};
    std::string m_format = "grid";
    add_common(modes, mc);
    modes->add_option("--kappa", m_kappas, "Eigenfrequencies to render");
    modes->add_option("--interval", m_interval, "Solve this interval and render every mode")
        ->expected(2);
    modes->add_option("--grid", m_grid, "Output grid nx ny")->expected(2);
    modes->add_option("--format", m_format, "json | csv | grid | png");

    // shapes
    auto* shapes = app.add_subcommand("shapes", "List built-in shapes");
    bool shapes_json = false;
    shapes->add_flag("--json", shapes_json, "Machine-readable catalogue");

    // selftest
    auto* selftest = app.add_subcommand("selftest", "Verify CLI defaults against the library");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(sc, s_interval[0], s_interval[1]);
        if (sweep->parsed()) return cmd_sweep(wc, w_interval[0], w_interval[1], w_samples);
        if (conv->parsed()) return cmd_converge(cc, c_kappa, c_nlist, c_halfwidth);
        if (modes->parsed())
            return cmd_modes(mc, m_kappas, m_interval, m_grid[0], m_grid[1], m_format);
        if (shapes->parsed()) return cmd_shapes(shapes_json);
        if (selftest->parsed()) return cmd_selftest();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_bad_shape;
    }
    return exit_ok;
}
