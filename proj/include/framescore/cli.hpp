#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "framescore/trainer.hpp"

namespace framescore::cli {

/// Settings resolved from defaults, an optional key = value file, and
/// command-line flags (flags win).
struct RunConfig {
    std::string corpus_path;
    std::string pretrained_path;
    std::string pretrained_sgns;
    std::string pretrained_cbow;
    std::string pretrained_glove;
    std::vector<std::string> lexicon_paths;
    std::string entities_path;
    TrainConfig train;
    int window_days = 7;
    std::string origin;
    std::size_t replications = 10;
    std::string output_dir = "out";
    std::uint64_t seed = 1;
    std::size_t jobs = 1;
    bool include_null = true;
    std::size_t null_size = 0;  // 0: size of the balanced first lexicon
    std::string method = "default";
    std::vector<std::string> methods;

    /// Canonical `key=value` lines, sorted by key; hashed into the manifest.
    std::map<std::string, std::string> settings;
    /// Keys set by the config file or a flag rather than by default.
    std::set<std::string> explicit_keys;
};

/// Parses `key = value` lines; `#` starts a comment. Throws ParseError on a
/// malformed line and ValidationError on an unknown key.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Builds the typed configuration from merged settings.
RunConfig resolve(const std::map<std::string, std::string>& settings, const std::set<std::string>& explicit_keys);

/// Default value of every recognized key.
const std::map<std::string, std::string>& default_settings();

/// FNV-1a 64-bit hash rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

/// Entry point. Returns 0 on success, 1 on runtime or input errors and 2
/// on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace framescore::cli
