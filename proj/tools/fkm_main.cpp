#include "fkm/fkm.hpp"

int main() { return 0; }
