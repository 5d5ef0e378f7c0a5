#include <doctest.h>
TEST_SUITE_BEGIN("study");
TEST_SUITE_END();
