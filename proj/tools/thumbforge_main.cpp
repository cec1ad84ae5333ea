#include "thumbforge/thumbforge.hpp"
int main() { return 0; }
