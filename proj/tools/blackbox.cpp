// Example black box for `coend encode analyze`: answers requests with
// (x_0..x_{n-1}) ⊗ τ. With --shift, adds 1 to every odd coordinate, which is
// not equivariant.
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

int main(int argc, char** argv) {
  CLI::App app{"wire-protocol black box computing -⊗tau"};
  unsigned tau = 0;
  bool shift = false;
  app.add_option("--tau", tau, "index of tau in F[n]")->required();
  app.add_flag("--shift", shift, "perturb odd coordinates");
  CLI11_PARSE(app, argc, argv);

  std::string line;
  while (std::getline(std::cin, line)) {
    std::istringstream in(line);
    unsigned long long vertex = 0;
    in >> vertex;
    std::vector<unsigned long long> xs;
    for (unsigned long long x; in >> x;) xs.push_back(shift && x % 2 ? x + 1 : x);
    std::cout << xs.size();
    for (auto x : xs) std::cout << ' ' << x;
    std::cout << ' ' << tau << '\n' << std::flush;
  }
}
