#include <cstdlib>
#include <iostream>

#include "hamrec/acceptance.hpp"

int main(int argc, char** argv) {
  hamrec::acceptance::Options opt;
  if (argc > 1) opt.seed = std::strtoull(argv[1], nullptr, 10);
  bool all = true;
  hamrec::acceptance::run_all(opt, [&](const hamrec::acceptance::Result& r) {
    std::cout << hamrec::acceptance::format_line(r) << std::endl;
    all = all && r.pass;
  });
  return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
