#include "ergopt/cli.hpp"
#include "ergopt/kernels.hpp"

int main(int argc, char** argv) {
  ergopt::kernels::configure_threads_from_env();
  return ergopt::cli::run(argc, argv);
}
