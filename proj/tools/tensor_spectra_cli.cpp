#include "tensor_spectra/runner.hpp"

int main(int argc, char** argv) { return tensor_spectra::run_main(argc, argv); }
