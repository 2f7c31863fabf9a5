#include "fraclms/cli.hpp"

#include "fraclms/config.hpp"
#include "fraclms/errors.hpp"
#include "fraclms/output.hpp"

#include <chrono>
#include <ostream>

namespace fraclms::cli {

namespace {

void print_summary(std::ostream& out, const ExperimentSpec& spec, const ExperimentResult& r) {
    out << to_string(spec.kind) << ' ' << to_string(spec.algorithm) << " snr=" << format_shortest(spec.snr_db)
        << " steady_state_db=" << format_sig12(r.curve.steady_state_db)
        << " convergence_iter=" << r.curve.convergence_iter;
    if (spec.kind == ExperimentKind::SysId) out << " weight_error=" << format_sig12(r.weight_error);
    out << " wall_time_s=" << format_sig12(r.curve.wall_time_s) << '\n';
}

std::vector<ComparisonRecord> run_and_emit(const std::vector<ExperimentSpec>& specs,
                                           const std::filesystem::path& out_dir, bool write_curves,
                                           std::ostream& out) {
    std::vector<ComparisonRecord> records;
    for (const auto& spec : specs) {
        const ExperimentResult r = run_experiment(spec);
        print_summary(out, spec, r);
        if (write_curves) {
            const auto path = out_dir / (curve_stem(spec) + ".csv");
            emit_curve(r.curve, spec, path);
        }
        records.push_back({spec.kind, spec.snr_db, spec.algorithm, r.curve.steady_state_db, r.curve.convergence_iter});
    }
    return records;
}

int execute(const Request& req, std::ostream& out) {
    const auto started = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count(); };

    switch (req.command) {
    case Command::Run:
        run_and_emit(req.specs, req.out_dir, true, out);
        return kExitOk;
    case Command::Compare: {
        const auto records = run_and_emit(req.specs, req.out_dir, true, out);
        emit_comparison(records, req.specs, req.out_dir / "comparison.csv", elapsed());
        return kExitOk;
    }
    case Command::Replay: {
        const RunManifest m = RunManifest::from_json(read_file(req.manifest));
        if (m.specs.empty() || m.outputs.size() != 1) throw ConfigError("manifest", "expected specs and one output");
        for (const auto& s : m.specs) s.validate();
        if (m.command == "run") {
            for (const auto& spec : m.specs) {
                const ExperimentResult r = run_experiment(spec);
                print_summary(out, spec, r);
                emit_curve(r.curve, spec, req.out_dir / m.outputs.front());
            }
        } else if (m.command == "compare") {
            const auto records = run_and_emit(m.specs, req.out_dir, false, out);
            emit_comparison(records, m.specs, req.out_dir / m.outputs.front(), elapsed());
        } else {
            throw ConfigError("manifest", "unknown command '" + m.command + "'");
        }
        return kExitOk;
    }
    }
    return kExitUsage;
}

} // namespace

int run_main(std::span<const std::string> args, std::ostream& out, std::ostream& err,
             std::optional<std::string> env_seed) {
    try {
        const Request req = parse_config(args, std::move(env_seed));
        if (req.help) {
            out << req.help_text;
            return kExitOk;
        }
        return execute(req, out);
    } catch (const ConfigError& e) {
        err << "fraclms: usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "fraclms: usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DivergenceError& e) {
        err << "fraclms: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const IoError& e) {
        err << "fraclms: I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        err << "fraclms: error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace fraclms::cli
