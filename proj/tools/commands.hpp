#pragma once

namespace paradoxlab::cli {

// Exit codes: 0 success, 1 I/O, 2 invalid config, 3 numerical degeneracy.
int run(int argc, char** argv);

}  // namespace paradoxlab::cli
