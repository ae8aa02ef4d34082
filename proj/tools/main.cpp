#include <iostream>

#include "sparse_smooth/cli.hpp"

int main(int argc, char** argv) {
    try {
        return sparse_smooth::cli::run(argc, argv, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << '\n';
        return 1;
    }
}
