#include "commands.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <string>

#include "config_io.hpp"
#include "repeaterlab/errors.hpp"
#include "repeaterlab/probe_model.hpp"
#include "run_manifest.hpp"

#ifndef REPEATERLAB_VERSION
#define REPEATERLAB_VERSION "0.0.0"
#endif

namespace rlab::cli {

namespace {

int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const SimDeadlockError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int cmd_analyze(const AnalyzeOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const std::string started = utc_timestamp_now();
        if (!(o.eta_sq > 0.0 && o.eta_sq <= 1.0))
            throw ValidationError("--eta-sq must lie in (0, 1]");
        if (o.pc_steps < 1) throw ValidationError("--pc-steps must be >= 1");
        if (!(o.pc_min > 0.0)) throw ValidationError("--pc-min must be > 0");
        if (!(o.pc_max >= o.pc_min))
            throw ValidationError("--pc-max must be >= --pc-min");

        const double eta = std::sqrt(o.eta_sq);
        std::string body = "p_c,d_opt,f_max,p_s\n";
        for (int i = 0; i < o.pc_steps; ++i) {
            const double p_c =
                o.pc_steps == 1
                    ? o.pc_min
                    : o.pc_min + (o.pc_max - o.pc_min) * i / (o.pc_steps - 1);
            const auto r = probe::optimize_distinguishability(p_c, eta);
            body += format_double(p_c) + "," + format_double(r.d_opt) + "," +
                    format_double(r.f_max) + "," + format_double(r.p_s) + "\n";
        }
        write_text_file(o.out_path, body);

        RunManifest m;
        m.command = "analyze";
        m.resolved_config = {{"eta_sq", o.eta_sq},
                             {"pc_min", o.pc_min},
                             {"pc_max", o.pc_max},
                             {"pc_steps", o.pc_steps}};
        m.tool_version = REPEATERLAB_VERSION;
        m.started_at_utc = started;
        m.finished_at_utc = utc_timestamp_now();
        m.output_paths = {o.out_path};
        write_manifest(m, o.out_path + ".manifest.json");

        out << "wrote " << o.out_path << " (" << o.pc_steps << " rows)\n";
        return 0;
    });
}

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const std::string started = utc_timestamp_now();
        sim::ChainConfig config = load_config(o.config_path);
        config.rng_seed = o.seed;
        const sim::SimResult result = sim::run(config);

        write_text_file(o.out_path, result_to_json(result).dump(2) + "\n");

        RunManifest m;
        m.command = "simulate";
        m.resolved_config = config_to_json(result.config);
        m.seed = o.seed;
        m.tool_version = REPEATERLAB_VERSION;
        m.started_at_utc = started;
        m.finished_at_utc = utc_timestamp_now();
        m.output_paths = {o.out_path};
        write_manifest(m, o.out_path + ".manifest.json");

        out << "rate_hz=" << format_double(result.rate_hz)
            << " fidelity=" << format_double(result.mean_final_fidelity) << "±"
            << format_double(result.std_final_fidelity) << "\n";
        return 0;
    });
}

int cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const std::string started = utc_timestamp_now();
        sim::ChainConfig config = load_config(o.config_path);
        config.rng_seed = o.seed;
        const auto results = sim::sweep_epsilon(config, o.epsilons, o.runs_per_point);

        std::string body = "epsilon,rate_hz,rate_std_hz,fidelity,fidelity_std,seed\n";
        for (std::size_t i = 0; i < results.size(); ++i) {
            const sim::SimResult& r = results[i];
            const double rate_std =
                r.mean_interarrival_ms > 0.0
                    ? 1000.0 * r.std_interarrival_ms /
                          (r.mean_interarrival_ms * r.mean_interarrival_ms)
                    : 0.0;
            body += format_double(o.epsilons[i]) + "," + format_double(r.rate_hz) +
                    "," + format_double(rate_std) + "," +
                    format_double(r.mean_final_fidelity) + "," +
                    format_double(r.std_final_fidelity) + "," +
                    std::to_string(r.seed) + "\n";
        }
        write_text_file(o.out_path, body);

        RunManifest m;
        m.command = "sweep";
        m.resolved_config = config_to_json(sim::resolved(config));
        m.seed = o.seed;
        m.tool_version = REPEATERLAB_VERSION;
        m.started_at_utc = started;
        m.finished_at_utc = utc_timestamp_now();
        m.output_paths = {o.out_path};
        write_manifest(m, o.out_path + ".manifest.json");

        out << "wrote " << o.out_path << " (" << results.size() << " points)\n";
        return 0;
    });
}

}  // namespace rlab::cli
