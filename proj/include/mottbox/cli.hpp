#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>

#include <json.hpp>

namespace mottbox::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitValidation = 2;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out_dir;
    unsigned threads = 0;  // 0: hardware concurrency
};

// Runs one experiment described by `config` ("experiment" is one of bell,
// scatter, track, isotropy, render). The whole configuration is parsed and
// checked before any computation: problems found there return
// kExitValidation, failures afterwards kExitRuntime. The one-line summary
// goes to `out`, diagnostics to `err`.
int run(const nlohmann::json& config, const Overrides& overrides, std::ostream& out, std::ostream& err);

// Reads the JSON file and calls run(); an unreadable or malformed file is
// a validation error.
int run_file(const std::filesystem::path& config_path, const Overrides& overrides, std::ostream& out,
             std::ostream& err);

}  // namespace mottbox::cli
