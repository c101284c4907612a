#include <iostream>

#include "seglab/acceptance.hpp"

int main() {
    auto results = seglab::run_acceptance(std::cout);
    bool ok = true;
    for (const auto& r : results) ok = ok && r.pass();
    std::cout << (ok ? "ACCEPTANCE: PASS" : "ACCEPTANCE: FAIL") << "\n";
    return ok ? 0 : 1;
}
