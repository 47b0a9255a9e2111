#include "acceptance/acceptance_suite.hpp"
#include "arithdyn/cli.hpp"

int main(int argc, char** argv)
{
    const arithdyn::cli::AcceptanceRunner acceptance = [](const arithdyn::cli::RunConfig& cfg, std::ostream& out) {
        const auto results = arithdyn::acceptance::run_acceptance({cfg.zeros_path, cfg.seed}, out);
        return arithdyn::acceptance::report(results, out);
    };
    return arithdyn::cli::run(argc, argv, std::cout, std::cerr, acceptance);
}
