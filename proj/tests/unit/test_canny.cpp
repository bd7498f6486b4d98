#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stormcast/canny.hpp"
#include "stormcast/contours.hpp"
#include "stormcast/errors.hpp"
#include "stormcast/rng.hpp"

#include "../support/oracles.hpp"
#include "../support/synthetic.hpp"

using namespace stormcast;

namespace {

GrayImage random_image(int w, int h, uint64_t seed, double lo = 0.0, double hi = 255.0) {
    GrayImage img(w, h);
    Rng rng(seed);
    for (auto& p : img.pixels()) p = lo + rng.next_unit() * (hi - lo);
    return img;
}

} // namespace

TEST_CASE("gaussian smoothing preserves constant images") {
    GrayImage img(16, 12, 128.0);
    const GrayImage out = gaussian_smooth(img, 1.4);
    REQUIRE(out.width() == 16);
    REQUIRE(out.height() == 12);
    for (double v : out.pixels()) CHECK(std::abs(v - 128.0) < 1e-9);
}

TEST_CASE("gaussian smoothing of a single bright pixel") {
    GrayImage img(9, 9, 0.0);
    img.at(4, 4) = 255.0;
    const GrayImage out = gaussian_smooth(img, 1.0);

    int radius = 0;
    const auto kernel = oracle::gaussian_kernel(1.0, radius);
    const double central = kernel[size_t(radius) * (2 * radius + 1) + size_t(radius)];
    CHECK(out.at(4, 4) == doctest::Approx(255.0 * central).epsilon(1e-12));

    double sum = 0.0;
    for (double v : out.pixels()) sum += v;
    CHECK(sum == doctest::Approx(255.0).epsilon(1e-6));
}

TEST_CASE("gaussian smoothing matches the brute-force convolution oracle") {
    const GrayImage img = random_image(3, 3, 41);
    int radius = 0;
    const auto kernel = oracle::gaussian_kernel(0.5, radius);
    const GrayImage expect = oracle::conv2d_replicate(img, kernel, radius);
    const GrayImage got = gaussian_smooth(img, 0.5);
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x)
            CHECK(got.at(x, y) == doctest::Approx(expect.at(x, y)).epsilon(1e-14));

    // larger sizes and sigmas too
    for (double sigma : {0.7, 1.4}) {
        const GrayImage big = random_image(13, 9, uint64_t(sigma * 100));
        const auto k2 = oracle::gaussian_kernel(sigma, radius);
        const GrayImage e2 = oracle::conv2d_replicate(big, k2, radius);
        const GrayImage g2 = gaussian_smooth(big, sigma);
        for (int y = 0; y < 9; ++y)
            for (int x = 0; x < 13; ++x)
                CHECK(g2.at(x, y) == doctest::Approx(e2.at(x, y)).epsilon(1e-13));
    }
}

TEST_CASE("gaussian smoothing error paths") {
    CHECK_THROWS_AS(gaussian_smooth(GrayImage{}, 1.0), DataError);
    CHECK_THROWS_AS(gaussian_smooth(GrayImage(4, 4, 1.0), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_smooth(GrayImage(4, 4, 1.0), -1.0), std::invalid_argument);
}

TEST_CASE("sobel gradient of a uniform image is zero") {
    const GradientField g = sobel_gradient(GrayImage(8, 8, 77.0));
    for (double m : g.magnitude) CHECK(m == 0.0);
}

TEST_CASE("sobel gradient of a vertical step edge") {
    GrayImage img(10, 8, 0.0);
    for (int y = 0; y < 8; ++y)
        for (int x = 5; x < 10; ++x) img.at(x, y) = 255.0;

    const GradientField g = sobel_gradient(img);
    // columns adjacent to the step carry the maximal response
    double peak = 0.0;
    for (int x = 0; x < 10; ++x) peak = std::max(peak, g.mag_at(x, 4));
    CHECK(peak == g.mag_at(4, 4));
    CHECK(peak == g.mag_at(5, 4));
    CHECK(g.dir_at(4, 4) == doctest::Approx(0.0)); // purely horizontal gradient
}

TEST_CASE("sobel gradient matches the direct stencil oracle") {
    const GrayImage img = random_image(5, 5, 97);
    GrayImage mag, dir;
    oracle::sobel_direct(img, mag, dir);
    const GradientField g = sobel_gradient(img);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 5; ++x) {
            CHECK(g.mag_at(x, y) == doctest::Approx(mag.at(x, y)).epsilon(1e-12));
            CHECK(g.dir_at(x, y) == doctest::Approx(dir.at(x, y)).epsilon(1e-12));
        }
}

TEST_CASE("sobel rejects images smaller than the kernel") {
    CHECK_THROWS_AS(sobel_gradient(GrayImage(2, 5, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(sobel_gradient(GrayImage(5, 2, 0.0)), std::invalid_argument);
}

TEST_CASE("sobel transpose symmetry" * doctest::description("magnitude invariant, direction maps to pi/2 - theta")) {
    for (uint64_t seed = 1; seed <= 12; ++seed) {
        const GrayImage img = random_image(8, 8, seed);
        GrayImage t(8, 8);
        for (int y = 0; y < 8; ++y)
            for (int x = 0; x < 8; ++x) t.at(y, x) = img.at(x, y);

        const GradientField g = sobel_gradient(img);
        const GradientField gt = sobel_gradient(t);
        for (int y = 1; y < 7; ++y)
            for (int x = 1; x < 7; ++x) {
                CHECK(g.mag_at(x, y) == doctest::Approx(gt.mag_at(y, x)).epsilon(1e-12));
                if (g.mag_at(x, y) < 1e-9) continue;
                // compare orientations modulo pi
                double expect = std::numbers::pi / 2 - g.dir_at(x, y);
                if (expect > std::numbers::pi / 2) expect -= std::numbers::pi;
                const double got = gt.dir_at(y, x);
                const double diff = std::abs(expect - got);
                CHECK((diff < 1e-9 || std::abs(diff - std::numbers::pi) < 1e-9));
            }
    }
}

TEST_CASE("non-maximum suppression keeps an ideal one-pixel ridge") {
    GradientField g;
    g.width = 9;
    g.height = 9;
    g.magnitude.assign(81, 0.0);
    g.direction.assign(81, 0.0); // gradient along x: compare left/right
    for (int y = 0; y < 9; ++y) g.magnitude[size_t(y) * 9 + 4] = 100.0;

    const GrayImage out = nonmax_suppress(g);
    for (int y = 0; y < 9; ++y)
        for (int x = 0; x < 9; ++x)
            CHECK(out.at(x, y) == (x == 4 ? 100.0 : 0.0));
}

TEST_CASE("non-maximum suppression is deterministic and idempotent on plateaus") {
    GradientField g;
    g.width = 6;
    g.height = 6;
    g.magnitude.assign(36, 5.0);
    g.direction.assign(36, 0.0);

    const GrayImage once = nonmax_suppress(g);
    // uniform field: >= tie rule keeps everything
    for (double v : once.pixels()) CHECK(v == 5.0);

    GradientField g2;
    g2.width = 6;
    g2.height = 6;
    g2.magnitude = once.pixels();
    g2.direction.assign(36, 0.0);
    const GrayImage twice = nonmax_suppress(g2);
    CHECK(twice.pixels() == once.pixels());
}

TEST_CASE("non-maximum suppression keeps exactly the crest of a ramp edge") {
    // 7x7, magnitude rises to a crest at x=3 and falls: 1 2 5 9 5 2 1
    const double profile[7] = {1, 2, 5, 9, 5, 2, 1};
    GradientField g;
    g.width = 7;
    g.height = 7;
    g.magnitude.assign(49, 0.0);
    g.direction.assign(49, 0.0);
    for (int y = 0; y < 7; ++y)
        for (int x = 0; x < 7; ++x) g.magnitude[size_t(y) * 7 + x] = profile[x];

    const GrayImage out = nonmax_suppress(g);
    for (int y = 1; y < 6; ++y)
        for (int x = 1; x < 6; ++x)
            CHECK(out.at(x, y) == (x == 3 ? 9.0 : 0.0));
}

TEST_CASE("hysteresis with everything below low yields all-false") {
    GrayImage mag(6, 6, 10.0);
    const BinaryImage out = hysteresis_threshold(mag, 50.0, 100.0);
    CHECK(out.count() == 0);
}

TEST_CASE("hysteresis pulls a weak 8-connected chain from one strong pixel") {
    GrayImage mag(8, 3, 0.0);
    mag.at(0, 1) = 200.0; // strong
    for (int x = 1; x < 8; ++x) mag.at(x, 1) = 60.0; // weak chain
    mag.at(4, 0) = 60.0; // weak, diagonally attached

    const BinaryImage out = hysteresis_threshold(mag, 50.0, 100.0);
    for (int x = 0; x < 8; ++x) CHECK(out.at(x, 1));
    CHECK(out.at(4, 0));
    CHECK(out.count() == 9);
}

TEST_CASE("hysteresis matches the fixed-point flood oracle on random fields") {
    for (uint64_t seed = 0; seed < 20; ++seed) {
        const GrayImage mag = random_image(10, 10, 1000 + seed, 0.0, 150.0);
        const BinaryImage expect = oracle::hysteresis_fixed_point(mag, 40.0, 100.0);
        const BinaryImage got = hysteresis_threshold(mag, 40.0, 100.0);
        CHECK(got == expect);
    }
}

TEST_CASE("hysteresis is monotone in the low threshold") {
    for (uint64_t seed = 0; seed < 10; ++seed) {
        const GrayImage mag = random_image(12, 12, 2000 + seed, 0.0, 150.0);
        const BinaryImage tight = hysteresis_threshold(mag, 60.0, 100.0);
        const BinaryImage loose = hysteresis_threshold(mag, 30.0, 100.0);
        for (int y = 0; y < 12; ++y)
            for (int x = 0; x < 12; ++x)
                if (tight.at(x, y)) CHECK(loose.at(x, y));
    }
}

TEST_CASE("hysteresis rejects inverted thresholds") {
    GrayImage mag(4, 4, 0.0);
    CHECK_THROWS_AS(hysteresis_threshold(mag, 100.0, 50.0), std::invalid_argument);
    CHECK_THROWS_AS(hysteresis_threshold(mag, 0.0, 50.0), std::invalid_argument);
}

TEST_CASE("solar disk localization on synthetic disks") {
    SUBCASE("centered disk") {
        synth::SunScene scene;
        scene.size = 512;
        scene.disk_radius_fraction = 100.0 / 512.0;
        const GrayImage img = synth::render(scene);
        const DiskGeometry disk = solar_disk_mask(img);
        CHECK(std::abs(disk.center_x - 256.0) <= 1.0);
        CHECK(std::abs(disk.center_y - 256.0) <= 1.0);
        CHECK(std::abs(disk.radius - 100.0) <= 2.0);
    }
    SUBCASE("off-center disk") {
        GrayImage img(512, 512, 0.0);
        for (int y = 0; y < 512; ++y)
            for (int x = 0; x < 512; ++x)
                if ((x - 100) * (x - 100) + (y - 300) * (y - 300) <= 50 * 50)
                    img.at(x, y) = 200.0;
        const DiskGeometry disk = solar_disk_mask(img);
        CHECK(std::abs(disk.center_x - 100.0) <= 1.0);
        CHECK(std::abs(disk.center_y - 300.0) <= 1.0);
        CHECK(std::abs(disk.radius - 50.0) <= 1.0);
    }
    SUBCASE("no contrast") {
        CHECK_THROWS_WITH_AS(solar_disk_mask(GrayImage(64, 64, 255.0)),
                             "no solar disk detected", DataError);
    }
}

TEST_CASE("canny of a uniform image has zero edge pixels") {
    const BinaryImage out = canny(GrayImage(64, 64, 128.0), CannyParams{});
    CHECK(out.count() == 0);
}

TEST_CASE("canny finds exactly one edge structure for one planted spot") {
    synth::SunScene scene;
    scene.spots.push_back({512.0 + 80.0, 512.0 - 40.0, 10.0, 20.0});
    scene.disk_intensity = 200.0;
    const GrayImage img = synth::render(scene);

    const BinaryImage edges = canny(img, synth::synthetic_canny_params());
    CHECK(edges.count() > 0);
    CHECK(oracle::component_count_union_find(edges) == 1);
}

TEST_CASE("canny rejects a pale spot whose border gradient sits below low") {
    synth::SunScene scene;
    scene.disk_intensity = 200.0;
    scene.spots.push_back({512.0 - 60.0, 512.0 + 30.0, 10.0, 145.0});
    const GrayImage img = synth::render(scene);
    const CannyParams params = synth::synthetic_canny_params();

    // oracle check: inside the disk the smoothed Sobel magnitude stays < low
    int radius = 0;
    const auto kernel = oracle::gaussian_kernel(params.smoothing_sigma, radius);
    const GrayImage smoothed = oracle::conv2d_replicate(img, kernel, radius);
    GrayImage mag, dir;
    oracle::sobel_direct(smoothed, mag, dir);
    const DiskGeometry disk = solar_disk_mask(img);
    double peak_inside = 0.0;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            const double dx = x - disk.center_x;
            const double dy = y - disk.center_y;
            if (std::sqrt(dx * dx + dy * dy) < disk.radius * 0.95)
                peak_inside = std::max(peak_inside, mag.at(x, y));
        }
    REQUIRE(peak_inside < params.low_threshold);

    CHECK(canny(img, params).count() == 0);
}

TEST_CASE("canny leaves no edge pixel outside the disk interior") {
    synth::SunScene scene;
    scene.spots.push_back({512.0, 512.0 + 100.0, 8.0, 10.0});
    const GrayImage img = synth::render(scene);
    const CannyParams params = synth::synthetic_canny_params();

    const BinaryImage edges = canny(img, params);
    REQUIRE(edges.count() > 0);
    const DiskGeometry disk = solar_disk_mask(img);
    const double keep = disk.radius * (1.0 - params.disk_margin_fraction);
    for (int y = 0; y < edges.height(); ++y)
        for (int x = 0; x < edges.width(); ++x)
            if (edges.at(x, y)) {
                const double dx = x - disk.center_x;
                const double dy = y - disk.center_y;
                CHECK(std::sqrt(dx * dx + dy * dy) < keep);
            }
}

TEST_CASE("canny is bit-deterministic") {
    synth::SunScene scene = synth::scene_with_groups(4, 2, 11);
    const GrayImage img = synth::render(scene);
    const CannyParams params = synth::synthetic_canny_params();
    CHECK(canny(img, params) == canny(img, params));
}
