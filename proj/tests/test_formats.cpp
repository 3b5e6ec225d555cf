#include <doctest.h>
TEST_CASE("formats placeholder"){CHECK(true);}
