// SPDX-License-Identifier: Apache-2.0
#include "hillpr/cli.hpp"

int main(int argc, char** argv)
{
    return hillpr::run_cli(argc, argv);
}
