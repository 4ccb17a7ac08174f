#include "commands.hpp"
#include "settings.hpp"

#include <qlambda/error.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <memory>

namespace {

int exit_code(qlambda::ErrorCode code) {
    using qlambda::ErrorCode;
    switch (code) {
        case ErrorCode::ParseError:
        case ErrorCode::InvalidArgument:
        case ErrorCode::SuperluminalBoost:
        case ErrorCode::BelowThreshold:
            return 2;
        case ErrorCode::StepTooLarge:
            return 3;
        case ErrorCode::GridTooCoarse:
            return 5;
        default:
            return 4;
    }
}

}  // namespace

int main(int argc, char** argv) {
    using namespace qlambda::cli;

    CLI::App app{"Three-level effective-coupling toolkit"};
    app.name("qlambda");
    app.require_subcommand(1);

    std::vector<std::pair<CLI::App*, std::unique_ptr<Settings>>> subs;
    for (const CommandSpec& cmd : commands()) {
        CLI::App* sub = app.add_subcommand(cmd.name, cmd.description);
        auto settings = std::make_unique<Settings>(*sub);
        cmd.add_flags(*settings);
        subs.emplace_back(sub, std::move(settings));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (!subs[i].first->parsed()) continue;
        try {
            subs[i].second->finalize();
            commands()[i].run(*subs[i].second);
            return 0;
        } catch (const qlambda::Error& e) {
            std::cerr << "qlambda " << commands()[i].name << ": " << e.what() << '\n';
            return exit_code(e.code());
        } catch (const std::exception& e) {
            std::cerr << "qlambda " << commands()[i].name << ": " << e.what() << '\n';
            return 1;
        }
    }
    return 2;
}
