#ifndef BELHD_CLI_H_
#define BELHD_CLI_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "belhd/encoder.h"
#include "belhd/training.h"

namespace belhd {

// Settings shared by `train` and `pipeline`, read from a key = value file.
struct RunConfig {
  FeatureConfig features;
  std::uint32_t projection_dim = 128;
  TrainConfig train;

  // Canonical key = value form; its SHA-256 is the manifest config digest.
  std::string canonical() const;
};

// Lines "key = value"; '#' starts a comment. Unknown keys are errors.
// Keys: epochs, pool_size, learning_rate, seed, reencode_every_steps,
// group_size, hash_dim, projection_dim, min_n, max_n, context_weight,
// context_window.
RunConfig parse_run_config(std::istream &in, RunConfig base = {});
RunConfig parse_run_config(const std::filesystem::path &path,
                           RunConfig base = {});

// Exit status: 0 success, 1 validation or runtime failure, 2 usage error.
int dispatch(const std::vector<std::string> &args, std::ostream &out,
             std::ostream &err);
int dispatch(int argc, const char *const *argv);

}  // namespace belhd

#endif  // BELHD_CLI_H_
