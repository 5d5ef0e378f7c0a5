#include <doctest.h>
TEST_SUITE_BEGIN("flexopf");
TEST_SUITE_END();
