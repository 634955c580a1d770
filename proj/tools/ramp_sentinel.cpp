#include "ramp_sentinel/cli.hpp"

int main(int argc, char** argv) {
    return ramp::run_cli(argc, argv);
}
