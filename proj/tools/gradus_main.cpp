#include <iostream>
#include <vector>

#include "gradus/report.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        gradus::RunConfig cfg = gradus::parse_args(args);
        return gradus::run_command(cfg, std::cout);
    } catch (const gradus::HelpRequested& h) {
        std::cout << h.text;
        return 0;
    } catch (const gradus::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
