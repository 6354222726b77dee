#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "qnet/random.hpp"
#include "qnet/units.hpp"

using namespace qnet;

TEST_CASE("frequency and wavelength conversions invert each other") {
    for (double nm : {521.4, 787.5, 1543.2}) CHECK(units::thz_to_nm(units::nm_to_thz(nm)) == doctest::Approx(nm).epsilon(1e-14));
    CHECK(units::nm_to_thz(1550.0) == doctest::Approx(193.414).epsilon(1e-5));
}

TEST_CASE("energy conservation partner wavelength") {
    const double idler = units::partner_wavelength_nm(521.4, 787.5);
    CHECK(1.0 / 787.5 + 1.0 / idler == doctest::Approx(1.0 / 521.4).epsilon(1e-15));
    CHECK(idler == doctest::Approx(1543.1).epsilon(1e-3));
}

TEST_CASE("derive_seed: counter zero is the parent, children are distinct") {
    CHECK(derive_seed(42, 0) == 42);
    std::set<std::uint64_t> seen;
    for (std::uint64_t k = 0; k < 10000; ++k) seen.insert(derive_seed(7, k));
    CHECK(seen.size() == 10000);
    CHECK(derive_seed(1, 2, 3) == derive_seed(derive_seed(1, 2), 3));
    CHECK(derive_seed(1, 2) != derive_seed(2, 1));
}

TEST_CASE("streams from neighbouring cells are uncorrelated") {
    // Pearson correlation of uniform draws from cells k and k+1 over many
    // cells; each pair contributes n samples, |r| should stay within ~4/sqrt(n).
    const int n = 20000;
    for (std::uint64_t cell = 0; cell < 8; ++cell) {
        Rng a(derive_seed(123, cell));
        Rng b(derive_seed(123, cell + 1));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
        for (int i = 0; i < n; ++i) {
            const double x = u(a), y = u(b);
            sa += x; sb += y; sab += x * y; saa += x * x; sbb += y * y;
        }
        const double cov = sab / n - sa / n * sb / n;
        const double r = cov / std::sqrt((saa / n - sa * sa / n / n) * (sbb / n - sb * sb / n / n));
        CHECK(std::abs(r) < 4.0 / std::sqrt(n));
    }
}
