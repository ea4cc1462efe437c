// Near-critical sampling and interpolation sets for [0,1] at shrinking budgets.

#include <iostream>

#include "lcatile.hpp"

using namespace lcatile;

int main() {
    GroupSignature R{1, 0, 0, {}, Side::frequency};
    Region omega(R, {Cell{{Interval{0, 1}}, {}, {}, {}}});
    for (long e : {4, 8, 16, 32}) {
        Rational eps = make_rational(1, e);
        auto S = sampling_set(omega, eps);
        auto I = interpolation_set(omega, eps);
        std::cout << "eps=" << eps << "  sampling: n=" << S.cover.n << " k=" << S.J.shifts.size()
                  << " density=" << S.density << " A=" << S.certificate.A << "  interpolation: n=" << I.cover.n
                  << " k=" << I.J.shifts.size() << " density=" << I.density << " A=" << I.certificate.A << "\n";
    }
}
