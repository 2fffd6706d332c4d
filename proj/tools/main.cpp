#include <iostream>

int main() {
    std::cout << "groupdyn (placeholder)\n";
    return 0;
}
