#include "qscatter/cli.hpp"

int main(int argc, char** argv) {
    return qscatter::run_cli(argc, argv);
}
