#include <catch2/catch_amalgamated.hpp>
#include "thumbforge/thumbforge.hpp"
