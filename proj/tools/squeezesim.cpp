// CLI entry point; subcommands are wired up as the library lands.
#include <cstdio>

int main() {
  std::fprintf(stderr, "squeezesim: not wired up yet\n");
  return 2;
}
