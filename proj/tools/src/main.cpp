/******************************************************************************
 * Copyright (c) 2026, the koopman-mor project developers.
 * SPDX-License-Identifier: Apache-2.0
 *****************************************************************************/

#include "koopman/cli.hpp"

int main(int argc, char** argv) { return koopman::cli::run(argc, argv); }
