// SPDX-FileCopyrightText: Copyright (c) 2026 The gridnoise Authors
// SPDX-License-Identifier: Apache-2.0

#include "gridnoise/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return gridnoise::cli::run(argc, argv, std::cout, std::cerr);
}
