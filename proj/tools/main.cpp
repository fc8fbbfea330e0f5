#include "cli_support.hpp"
#include "commands.hpp"

#include "cod/acceptance.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace cod::cli;

    CLI::App app{"Series solutions of linear operator equations by cyclic operator decomposition", "cod"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::function<int()> action;
    register_commands(app, action);

    std::vector<std::string> args(argv, argv + argc);
    try {
        cod::acceptance::thread_count_from_env();
        args = expand_config(std::move(args));
        std::vector<const char*> raw;
        for (const auto& a : args) raw.push_back(a.c_str());
        app.parse(static_cast<int>(raw.size()), raw.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return bad_arguments;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return bad_arguments;
    }

    try {
        return action();
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return bad_arguments;
    } catch (const cod::expr::ParseError& e) {
        std::cerr << "error: bad expression: " << e.what() << '\n';
        return bad_arguments;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return solver_error;
    }
}
