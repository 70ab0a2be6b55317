#include "qcorr/cli.hpp"

int main(int argc, char** argv) {
  return qcorr::dispatch(std::vector<std::string>(argv, argv + argc));
}
