#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qwalk/errors.hpp"
#include "qwalk/io.hpp"

namespace {

struct CommonArgs {
    std::string manifest_path;
    std::string out_dir;
    std::string fixture;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool out_set = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool manifest_required) {
    auto* m = cmd->add_option("--manifest", args.manifest_path, "run manifest (JSON)");
    if (manifest_required) m->required();
    cmd->add_option("--out", args.out_dir, "output directory")
        ->each([&](const std::string&) { args.out_set = true; });
    cmd->add_option("--seed", args.seed, "seed override")
        ->each([&](const std::string&) { args.seed_set = true; });
    cmd->add_option("--fixture", args.fixture,
                    "phase fixture: SortedWeak|SortedStrong|UnsortedStrong");
}

qwalk::CommandOptions to_options(const CommonArgs& args) {
    qwalk::CommandOptions opts;
    if (!args.fixture.empty())
        opts.fixture = qwalk::fixture_from_string(args.fixture);
    if (args.seed_set) opts.seed = args.seed;
    if (args.out_set) opts.out_dir = args.out_dir;
    return opts;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Brick-wall quantum walk simulator"};
    app.require_subcommand(1);

    CommonArgs sim_args, ens_args, uni_args, pha_args;
    std::string peaks_input, measured_path, simulated_path;
    CommonArgs peaks_args, cmp_args;

    auto* sim = app.add_subcommand("simulate", "single-run walk, distributions + variance");
    add_common(sim, sim_args, true);
    auto* ens = app.add_subcommand("ensemble", "noise-averaged ensemble run");
    add_common(ens, ens_args, true);
    auto* pks = app.add_subcommand("peaks", "variance peak detection + linear fit");
    pks->add_option("--input", peaks_input, "variance CSV file")->required();
    pks->add_option("--out", peaks_args.out_dir, "output directory")
        ->each([&](const std::string&) { peaks_args.out_set = true; });
    auto* cmp = app.add_subcommand("compare", "TVD between two distribution files");
    cmp->add_option("--measured", measured_path, "measured distribution CSV")->required();
    cmp->add_option("--simulated", simulated_path, "simulated distribution CSV")->required();
    cmp->add_option("--out", cmp_args.out_dir, "output directory")
        ->each([&](const std::string&) { cmp_args.out_set = true; });
    auto* uni = app.add_subcommand("unitary", "export the composed walk unitary");
    add_common(uni, uni_args, true);
    auto* pha = app.add_subcommand("phases", "generate/export a phase schedule");
    add_common(pha, pha_args, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            qwalk::cmd_simulate(qwalk::parse_manifest_file(sim_args.manifest_path),
                                to_options(sim_args));
        } else if (ens->parsed()) {
            qwalk::cmd_ensemble(qwalk::parse_manifest_file(ens_args.manifest_path),
                                to_options(ens_args));
        } else if (pks->parsed()) {
            qwalk::cmd_peaks(peaks_input, to_options(peaks_args));
        } else if (cmp->parsed()) {
            qwalk::cmd_compare(measured_path, simulated_path, to_options(cmp_args));
        } else if (uni->parsed()) {
            qwalk::cmd_unitary(qwalk::parse_manifest_file(uni_args.manifest_path),
                               to_options(uni_args));
        } else if (pha->parsed()) {
            qwalk::cmd_phases(qwalk::parse_manifest_file(pha_args.manifest_path),
                              to_options(pha_args));
        }
    } catch (const qwalk::SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return qwalk::kExitSchema;
    } catch (const qwalk::NumericError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return qwalk::kExitNumeric;
    } catch (const qwalk::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return qwalk::kExitIo;
    }
    return qwalk::kExitOk;
}
