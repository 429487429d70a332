// Compares the OpenMP code paths against their serial references: Gram
// matrix construction and per-pixel raster classification. Also checks that
// both paths agree bitwise, since that is the contract the parallel code
// must keep.

#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lcsvm/ensemble.hpp"
#include "lcsvm/synthetic.hpp"

using namespace lcsvm;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename F>
double time_best_of(int repeats, F&& f) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto start = Clock::now();
        f();
        best = std::min(best, seconds_since(start));
    }
    return best;
}

void report(const std::string& name, double serial, double parallel, bool equal) {
    std::printf("%-28s serial %8.3f ms   parallel %8.3f ms   speedup %5.2fx   %s\n",
                name.c_str(), serial * 1e3, parallel * 1e3, serial / parallel,
                equal ? "outputs identical" : "OUTPUT MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled; parallel paths run serially\n");
#endif

    SyntheticSpec spec;
    spec.rows = 160;
    spec.cols = 160;
    spec.samples_per_class = 80;
    const SyntheticScene scene = gen_synthetic(spec);

    {
        FeatureMatrix points(scene.samples.dim());
        for (std::size_t i = 0; i < scene.samples.size(); ++i)
            points.push_row(scene.samples.features.row(i));
        // Enlarge to make the quadratic cost visible.
        FeatureMatrix big(points.dim);
        for (int copy = 0; copy < 4; ++copy)
            for (std::size_t i = 0; i < points.size(); ++i)
                big.push_row(points.row(i));

        const KernelSpec kernel = RbfKernel{0.5};
        Matrix serial_out, parallel_out;
        const double serial =
            time_best_of(3, [&] { serial_out = kernel_matrix_serial(kernel, big); });
        const double parallel =
            time_best_of(3, [&] { parallel_out = kernel_matrix(kernel, big); });
        report("gram matrix (" + std::to_string(big.size()) + " pts)", serial,
               parallel, serial_out == parallel_out);
    }

    {
        const EnsembleModel ensemble =
            train_ensemble(scene.samples, default_member_specs());
        const MulticlassModel& model = ensemble.members[1].model;  // rbf
        ClassRaster serial_out, parallel_out;
        const double serial = time_best_of(
            3, [&] { serial_out = classify_raster_serial(model, scene.raster); });
        const double parallel = time_best_of(
            3, [&] { parallel_out = classify_raster(model, scene.raster); });
        report("classify raster (" + std::to_string(scene.raster.rows) + "x" +
                   std::to_string(scene.raster.cols) + ")",
               serial, parallel, serial_out == parallel_out);
    }
    return 0;
}
