#include <iostream>
#include <string>
#include <vector>

#include "sumtag/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sumtag::dispatch(args, std::cout, std::cerr);
}
