// grlw: run the solitary-wave, interaction, Maxwellian, stability and convergence studies.
//
// Exit codes: 0 success, 1 usage error, 2 solver failure.

#include "grlw/cli.hpp"
#include "grlw/experiments.hpp"

#include <exception>
#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    grlw::RunConfig cfg;
    try {
        cfg = grlw::parse_config(args);
    } catch (const grlw::HelpRequested& help) {
        std::cout << help.what();
        return 0;
    } catch (const grlw::UsageError& e) {
        std::cerr << "grlw: usage error [" << e.key() << "]: " << e.what() << "\n";
        return 1;
    }

    try {
        const auto result = grlw::run_experiment(cfg);
        for (const auto& f : result.files) std::cout << f.string() << "\n";
        if (result.failure) {
            std::cerr << "grlw: solver failure: " << *result.failure << "\n";
            return 2;
        }
    } catch (const grlw::UsageError& e) {
        std::cerr << "grlw: usage error [" << e.key() << "]: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "grlw: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
