#include <cstdio>

int main() {
    std::puts("arrvar: not yet wired");
    return 1;
}
