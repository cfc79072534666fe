#ifndef RBFGAN_CHECKPOINT_HPP
#define RBFGAN_CHECKPOINT_HPP

#include <string>

#include "rbfgan/gan.hpp"

namespace rbfgan {

// Line-oriented text checkpoint, version header "RBFGAN-CKPT v1":
//   - a config block (key = value) sufficient to rebuild both networks,
//   - one block per parameter matrix: "param <name> <rows> <cols>" followed
//     by one line per row of space-separated 17-digit values,
//   - the normalization stats as the pseudo-parameters norm.min / norm.max,
//   - a final "end" marker guarding against truncation.
// Values round-trip losslessly, so save -> load -> save is byte-identical.
//
// Error taxonomy: CheckpointVersionError (wrong or unknown version line),
// CheckpointFormatError (structure, missing blocks, truncation, junk),
// CheckpointShapeError (a parameter's dims disagree with the architecture).
// A load either succeeds completely or throws; no partial state escapes.

void checkpoint_save(const std::string& path, const GanModel& model);

GanModel checkpoint_load(const std::string& path);

}  // namespace rbfgan

#endif  // RBFGAN_CHECKPOINT_HPP
