// morsim: magneto-optical rotation sweeps and the verification suite.
//
// Exit codes: 0 success, 1 validation error, 2 verification failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "morsim/errors.hpp"
#include "morsim/sweep.hpp"
#include "morsim/verify.hpp"

namespace {

using namespace morsim;

struct RawOptions {
    std::string source = "collinear";
    std::string geometry;
    std::string observable = "two_photon";
    std::string mode_name = "aH";
    std::string pair = "aH,aV";
    std::string target;
    std::string output_mode;
    std::string out = "-";
    std::string inject_fault;
};

ModePair parse_pair(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw ValidationError("pair must look like aH,aV");
    return {parse_mode(text.substr(0, comma)), parse_mode(text.substr(comma + 1))};
}

Occupation parse_occupation(const std::string& text) {
    Occupation occ{};
    std::stringstream ss(text);
    std::string item;
    std::size_t i = 0;
    while (std::getline(ss, item, ',')) {
        if (i >= kNumModes) throw ValidationError("target needs 4 comma-separated counts");
        try {
            const long v = std::stol(item);
            if (v < 0) throw ValidationError("target counts must be >= 0");
            occ[i++] = static_cast<std::uint32_t>(v);
        } catch (const std::logic_error&) {
            throw ValidationError("bad target count '" + item + "'");
        }
    }
    if (i != kNumModes) throw ValidationError("target needs 4 comma-separated counts");
    return occ;
}

void finish_config(sweep::SweepConfig& c, const RawOptions& raw, sweep::OutputMode default_mode) {
    c.source = parse_source_kind(raw.source);
    if (!raw.geometry.empty()) {
        c.geometry = parse_geometry(raw.geometry);
    } else {
        c.geometry = c.source == SourceKind::noncollinear_pdc ? Geometry::noncollinear : Geometry::collinear;
    }
    c.observable = parse_observable_kind(raw.observable);
    c.mode = parse_mode(raw.mode_name);
    c.pair = parse_pair(raw.pair);
    if (!raw.target.empty()) c.target = parse_occupation(raw.target);
    c.output = raw.output_mode.empty() ? default_mode : sweep::parse_output_mode(raw.output_mode);
    if (c.threads == 0) throw ValidationError("--threads must be >= 1");
}

template <typename Fn>
int with_output(const std::string& path, Fn&& fn) {
    // Buffer first so a failed run leaves no partial file behind.
    std::ostringstream buffer;
    fn(buffer);
    if (path == "-") {
        std::cout << buffer.str();
        return 0;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ValidationError("cannot open output file '" + path + "'");
    file << buffer.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Magneto-optical rotation metrology with coherent and PDC light"};
    app.require_subcommand(1);

    sweep::SweepConfig config;
    RawOptions raw;
    double chi_plus = 0, chi_minus = 0, wavenumber = 0, length = 0, theta_plus = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--source", raw.source, "coherent | collinear | noncollinear");
        sub->add_option("--alpha", config.alpha, "coherent amplitude");
        sub->add_option("--r", config.r, "PDC interaction parameter");
        sub->add_option("--phi", config.phi, "pump phase (collinear PDC)");
        sub->add_option("--geometry", raw.geometry, "collinear | noncollinear (default follows --source)");
        sub->add_option("--observable", raw.observable, "intensity | two_photon | glauber4 | projection | nd_variance");
        sub->add_option("--mode-of", raw.mode_name, "mode for the intensity observable (aH, aV, bH, bV)");
        sub->add_option("--pair", raw.pair, "mode pair for coincidences, e.g. aH,aV");
        sub->add_option("--target", raw.target, "projection target occupation, e.g. 1,1,1,1");
        sub->add_option("--points", config.points, "grid points");
        sub->add_option("--mode", raw.output_mode, "numeric | exact | both");
        sub->add_option("--out", raw.out, "output CSV path ('-' for stdout)");
        sub->add_option("--threads", config.threads, "worker threads for grid evaluation");
        sub->add_option("--epsilon", config.epsilon, "absolute truncation target");
        sub->add_option("--pair-cap", config.pair_cap, "largest photon-pair truncation allowed");
        sub->add_option("--n-max", config.n_max, "fixed photon-pair truncation");
    };

    auto* fringe = app.add_subcommand("fringe", "observable versus rotation angle theta");
    add_common(fringe);
    fringe->add_option("--theta-min", config.grid_min);
    fringe->add_option("--theta-max", config.grid_max);
    fringe->add_option("--theta-plus", theta_plus, "global phase angle theta_+");
    fringe->add_option("--chi-plus", chi_plus);
    fringe->add_option("--chi-minus", chi_minus);
    fringe->add_option("--k", wavenumber);
    fringe->add_option("--l", length);

    auto* vis = app.add_subcommand("visibility", "fringe visibility versus r");
    add_common(vis);
    vis->add_option("--r-min", config.grid_min);
    vis->add_option("--r-max", config.grid_max);
    vis->add_option("--theta-points", config.theta_points, "theta samples per fringe (>= 257, default 257)");

    auto* env = app.add_subcommand("envelope", "four-photon projection at theta = 0 versus r");
    add_common(env);
    env->add_option("--r-min", config.grid_min);
    env->add_option("--r-max", config.grid_max);

    auto* sens = app.add_subcommand("sensitivity", "minimum detectable angle versus mean photon number");
    add_common(sens);
    sens->add_option("--mean-n-min", config.grid_min, "smallest mean photon number (> 1)");
    sens->add_option("--mean-n-max", config.grid_max, "largest mean photon number");

    auto* verify = app.add_subcommand("verify", "run the oracle-equivalence and invariant suite");
    verify->add_option("--inject-fault", raw.inject_fault, "test fixture: b-sign");
    verify->add_option("--out", raw.out, "report path ('-' for stdout)");
    verify->add_option("--threads", config.threads, "worker threads for fringe scans");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (verify->parsed()) {
            VerifyOptions opts;
            if (config.threads == 0) throw ValidationError("--threads must be >= 1");
            opts.threads = config.threads;
            if (raw.inject_fault == "b-sign") {
                opts.inject_b_sign_error = true;
            } else if (!raw.inject_fault.empty()) {
                throw ValidationError("unknown fault '" + raw.inject_fault + "'");
            }
            const auto report = run_verify(opts);
            with_output(raw.out, [&](std::ostream& os) { write_report(report, os); });
            return report.all_passed() ? 0 : 2;
        }

        if (fringe->parsed()) {
            if (fringe->count("--chi-plus") || fringe->count("--chi-minus") || fringe->count("--k") ||
                fringe->count("--l")) {
                config.medium = MediumSpec::from_susceptibilities(chi_plus, chi_minus, wavenumber, length);
            }
            if (fringe->count("--theta-plus")) config.medium.theta_plus = theta_plus;
            finish_config(config, raw, sweep::OutputMode::numeric);
            return with_output(raw.out, [&](std::ostream& os) { sweep::run_fringe(config, os, std::cerr); });
        }

        if (vis->parsed()) {
            if (!vis->count("--r-min")) config.grid_min = 0.01;
            if (!vis->count("--r-max")) config.grid_max = 1.3;
            if (!vis->count("--points")) config.points = 27;
            if (!vis->count("--theta-points")) config.theta_points = 257;
            finish_config(config, raw, sweep::OutputMode::numeric);
            return with_output(raw.out, [&](std::ostream& os) { sweep::run_visibility(config, os); });
        }

        if (env->parsed()) {
            if (!env->count("--r-min")) config.grid_min = 0.0;
            if (!env->count("--r-max")) config.grid_max = 3.0;
            if (!env->count("--source")) raw.source = "noncollinear";
            finish_config(config, raw, sweep::OutputMode::numeric);
            return with_output(raw.out, [&](std::ostream& os) { sweep::run_envelope(config, os); });
        }

        if (sens->parsed()) {
            if (!sens->count("--mean-n-min")) config.grid_min = 10.0;
            if (!sens->count("--mean-n-max")) config.grid_max = 1e4;
            finish_config(config, raw, sweep::OutputMode::exact);
            return with_output(raw.out, [&](std::ostream& os) { sweep::run_sensitivity(config, os); });
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
