#include <iostream>

#include "lcft/cli.hpp"

int main(int argc, char** argv) {
    using namespace lcft::cli;
    RunConfig cfg;
    try {
        cfg = load_config(argc, argv);
    } catch (const lcft::Error& e) {
        std::cerr << "lcft: " << e.what() << "\n"
                  << "usage: lcft <command> --gamma G [--mu M] [--alphas a,b,c] [--z z1,...] [--config FILE] ...\n";
        return exit_code(e.code());
    }
    const ResultRecord r = execute(cfg);
    if (r.error) std::cerr << "lcft: " << r.error->message << "\n";
    try {
        // Failed runs always produce the structured JSON record.
        emit(r, r.error ? Format::Json : cfg.format, cfg.output);
    } catch (const lcft::Error& e) {
        std::cerr << "lcft: " << e.what() << "\n";
        return 1;
    }
    return exit_code(r);
}
