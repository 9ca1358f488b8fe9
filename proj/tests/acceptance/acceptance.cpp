// Acceptance run: one PASS/FAIL line per criterion, with wall time checked
// against its limit.  Exits nonzero if any criterion fails.

#include "extcalc/demos.hpp"

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

using namespace extcalc;

namespace {

struct Criterion {
    int number;
    std::string title;
    std::vector<std::string> demos;
    double limit_seconds;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "Stokes demo gives exactly -7 on both sides", {"stokes-disk-minus7"}, 1.0},
        {2, "identity suite, 7 identities x 1000 random checks", {"identity-suite"}, 30.0},
        {3, "Betti numbers, orientability and the winding cochain", {"annulus-hole", "torus-betti"}, 5.0},
        {4, "Mobius strip integrates twisted top forms only", {"mobius-twisted-only"}, 5.0},
        {5, "F^F = 2 dt^dx^dy^dz", {"ffwedge-4d"}, 1.0},
        {6, "Gauss flux through nested surfaces on 32^3", {"gauss-point-charge"}, 60.0},
        {7, "Ampere circulation around a wire", {"ampere-wire"}, 60.0},
        {8, "plane wave order, divB and charge continuity", {"plane-wave"}, 120.0},
        {9, "Lorentz factor, lightlike vectors and magnitudes", {"metric-suite"}, 1.0},
        {10, "Lorentz force orthogonality and the rest charge", {"lorentz-rest-charge"}, 5.0},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        bool ok = true;
        double seconds = 0.0;
        std::string detail;
        for (const auto& id : c.demos) {
            try {
                const auto r = demos::run(id);
                seconds += r.seconds;
                for (const auto& line : r.lines) detail += "    " + line + "\n";
                ok = ok && r.passed;
            } catch (const std::exception& e) {
                detail += "    " + id + " threw: " + e.what() + "\n";
                ok = false;
            }
        }
        const bool in_time = seconds <= c.limit_seconds;
        if (!in_time) detail += "    time limit exceeded\n";
        const bool pass = ok && in_time;
        std::printf("%s criterion %d: %s (%.3f s, limit %.0f s)\n", pass ? "PASS" : "FAIL", c.number, c.title.c_str(),
                    seconds, c.limit_seconds);
        std::fputs(detail.c_str(), stdout);
        std::fflush(stdout);
        if (!pass) ++failed;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
