#pragma once

#include "settings.hpp"

#include <vector>

namespace qlambda::cli {

struct CommandSpec {
    const char* name;
    const char* description;
    void (*add_flags)(Settings&);
    void (*run)(const Settings&);
};

const std::vector<CommandSpec>& commands();

}  // namespace qlambda::cli
