// Writes the example input files into the directory given as argument.
#include <fstream>
#include <iostream>

#include "qpc/io.hpp"
#include "qpc/picard.hpp"

using namespace qpc;
using io::Json;

namespace {

void write(const std::string& dir, const std::string& name, const Json& j) {
    std::ofstream out(dir + "/" + name, std::ios::binary);
    out << io::dump(j);
}

AdamsModule scalar_module(Prime p, int exponent, long psi) {
    return AdamsModule::make(CyclicSum::cyclic(p, exponent), Matrix::Constant(1, 1, PLocal(psi)));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_examples DIR\n";
        return 1;
    }
    const std::string dir = argv[1];
    const Prime p(3);
    const Config cfg = Config::standard(p);
    const auto l0 = AdamsModule::line(p, 0);
    const auto zp = scalar_module(p, 1, 1);
    const auto unit = PeriodicComplex::unit(cfg);

    write(dir, "pi.json", io::document("periodic_complex", p, unit));
    for (long i : {-2L, 1L, 2L})
        write(dir, "pi_shift" + std::to_string(i) + ".json", io::document("periodic_complex", p, shift(unit, i)));
    write(dir, "p_zmodp.json", io::document("periodic_complex", p, periodify(BoundedComplex::concentrated(zp, 0), cfg)));

    const auto mult_p = BoundedComplex::make(p, 0, {l0, l0}, {AdamsMap::make(l0, l0, Matrix::Constant(1, 1, PLocal(3)))});
    write(dir, "mult_by_p.json", io::document("complex", p, mult_p));
    write(dir, "zmodp.json", io::document("complex", p, BoundedComplex::concentrated(zp, 0)));
    write(dir, "disk.json", io::document("complex", p, BoundedComplex::disk(AdamsModule::line(p, 1), 1)));

    const auto q = ChainMap::make(mult_p, BoundedComplex::concentrated(zp, 0), 0,
                                  {AdamsMap::make(l0, zp, Matrix::Constant(1, 1, PLocal(1)))});
    write(dir, "quotient_q.json", io::document("chain_map", p, q));
    write(dir, "sphere_to_disk.json", io::document("chain_map", p, sphere_to_disk(l0, 1)));
    write(dir, "unit_map.json", io::document("chain_map_to_periodic", p, unit_map(BoundedComplex::concentrated(l0, 0), cfg)));

    auto comps = PeriodicMap::identity(unit).components;
    comps[0] = AdamsMap::make(l0, l0, Matrix::Constant(1, 1, PLocal(3)));
    write(dir, "times_p_on_unit.json", io::document("periodic_map", p, PeriodicMap::make(unit, unit, comps)));

    Matrix ext(2, 2);
    ext << twist_scalar(p, 0), PLocal(1), PLocal(0), twist_scalar(p, 1);
    write(dir, "extension.json", io::document("module", p, AdamsModule::make(CyclicSum::free(p, 2), ext)));
    write(dir, "line1.json", io::document("module", p, AdamsModule::line(p, 1)));
    write(dir, "zmodp_module.json", io::document("module", p, zp));
    write(dir, "lines_family.json", io::document("family", p, DetectionFamily::lines(p, {-1, 0, 1})));
    return 0;
}
