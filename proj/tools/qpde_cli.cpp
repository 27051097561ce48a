#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qpde.h"

namespace {

struct Options {
    std::string config;
    std::string mode;
    std::string out;
    std::vector<double> times;
};

int apply_overrides(qpde_problem* p, const Options& opt) {
    if (!opt.mode.empty() && qpde_set_mode(p, opt.mode.c_str()) != QPDE_OK)
        return 1;
    if (!opt.out.empty() && qpde_set_out_dir(p, opt.out.c_str()) != QPDE_OK)
        return 1;
    if (!opt.times.empty() &&
        qpde_set_times(p, opt.times.data(), (int)opt.times.size()) != QPDE_OK)
        return 1;
    return 0;
}

int run_command(const Options& opt, int (*action)(qpde_problem*, char**),
                bool suppress_out = false) {
    qpde_problem* p = nullptr;
    if (qpde_problem_load(opt.config.c_str(), &p) != QPDE_OK) {
        std::fprintf(stderr, "%s\n", qpde_last_error());
        return 1;
    }
    int rc = apply_overrides(p, opt);
    if (suppress_out) qpde_set_out_dir(p, "");
    if (rc == 0) {
        char* text = nullptr;
        if (action(p, &text) == QPDE_OK) {
            std::fputs(text, stdout);
            qpde_string_free(text);
        } else {
            std::fprintf(stderr, "%s\n", qpde_last_error());
            rc = 1;
        }
    } else {
        std::fprintf(stderr, "%s\n", qpde_last_error());
    }
    qpde_problem_free(p);
    return rc;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum solver for linear PDEs with Robin boundary conditions"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* sub, bool with_out) {
        sub->add_option("--config", opt.config, "problem file")->required();
        sub->add_option("--mode", opt.mode, "matrix | circuit");
        if (with_out) sub->add_option("--out", opt.out, "output directory");
        sub->add_option("--T", opt.times, "override the evolution times");
    };

    auto* discretize = app.add_subcommand("discretize", "assemble and summarize the operator");
    add_common(discretize, false);
    auto* encode = app.add_subcommand("encode", "report the Hamiltonian block-encoding");
    add_common(encode, false);
    auto* evolve = app.add_subcommand("evolve", "run the pipeline and write artifacts");
    add_common(evolve, true);
    auto* compare = app.add_subcommand("compare", "run and print metrics against forward Euler");
    add_common(compare, false);
    auto* resources = app.add_subcommand("resources", "full resource report");
    add_common(resources, false);

    CLI11_PARSE(app, argc, argv);

    if (discretize->parsed()) return run_command(opt, qpde_discretize_report);
    if (encode->parsed()) return run_command(opt, qpde_encode_report);
    if (evolve->parsed()) return run_command(opt, qpde_run);
    if (compare->parsed()) return run_command(opt, qpde_run, true);
    return run_command(opt, qpde_resources_report);
}
