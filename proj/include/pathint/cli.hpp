#pragma once
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Config-driven experiment runner behind the command-line tool.  Everything
// lives in the library so the tests can drive full runs in-process; the
// binary in tools/ only parses flags and forwards here.

namespace pathint::cli {

// Any problem with the configuration itself: unreadable file, syntax error,
// unknown key, value out of range for the chosen experiment.  The runner
// turns these into exit code 2; everything thrown past the config phase is a
// numerical failure and exits 3.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat `[section]` / `key = value` text.  Full-line comments start with '#'
// or ';'; there are no inline comments, no quoting, and no includes.  Keys
// are addressed as "section.key".  Parsing is strict: every key must be
// consumed by a typed getter or the run is rejected naming the offender, so
// a misspelled or out-of-place key can never be silently ignored.
class Config {
 public:
  Config() = default;
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& key) const;

  // typed getters; each marks the key consumed.  The require_ forms throw
  // ConfigError when the key is missing, the get_ forms fall back.
  std::string require_str(const std::string& key);
  std::string get_str(const std::string& key, const std::string& fallback);
  double require_real(const std::string& key);
  double get_real(const std::string& key, double fallback);
  std::int64_t get_int(const std::string& key, std::int64_t fallback);
  bool get_bool(const std::string& key, bool fallback);
  std::vector<double> get_reals(const std::string& key,
                                std::vector<double> fallback);

  // command-line flags land on top of the file values
  void override_value(const std::string& key, const std::string& value);

  // throws naming the first key no getter ever asked for
  void reject_unknown() const;

  // sorted key=value lines and the FNV-1a hash over them; both include any
  // overrides, so the hash pins the run actually performed
  std::string canonical() const;
  std::uint64_t hash() const;

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

 private:
  struct Slot {
    std::string key, value;
    std::size_t line = 0;
    bool consumed = false;
  };
  Slot* find(const std::string& key);
  const std::string* consume(const std::string& key);

  std::vector<Slot> slots_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct RunOptions {
  std::string kind;  // simulate | fracnorm | integrate | localtime |
                     // tanaka | crossing | hedge | membership
  std::string config_path;
  std::string out_dir;        // overrides run.out when non-empty
  bool seed_given = false;    // --seed overrides run.seed
  std::uint64_t seed = 0;
};

// Runs one experiment end to end: parse, compute, write CSV artifacts plus
// a manifest into the output directory.  Returns the process exit status
// (0 ok, 2 config error, 3 numerical failure); diagnostics go to `log`.
int run_experiment(const RunOptions& opt, std::ostream& log);

}  // namespace pathint::cli
