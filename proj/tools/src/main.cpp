#include <cstdio>

int main() {
  std::puts("dynauct: subcommands not wired up yet");
  return 1;
}
