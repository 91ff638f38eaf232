// Small tour of the library over Q_3.

#include <iostream>

#include "nonarch/nonarch.hpp"

using namespace nonarch;

int main() {
  const FieldSpec f(3);

  const SplitNorm standard = SplitNorm::standard(f, 2);
  const SplitNorm skewed = lattice_norm(Lattice(f, Matrix::diagonal({1, 3})));
  std::cout << "d(Z_3^2, <e1, 3 e2>) = " << gi_distance(standard, skewed) << " log 3\n";

  const MatGroup shear(f, {Matrix::from_rows({{1, Scalar(1, 3)}, {0, 1}})});
  const auto cert = certify(shear);
  std::cout << "<[[1,1/3],[0,1]]> is " << verdict_name(cert) << ", invariant lattice "
            << json_io::to_json(std::get<Bounded>(cert).invariant_lattice.basis()).dump() << '\n';

  const ProjLineSpace line(f);
  const auto mu = FiniteMeasure<ProjLineSpace>::uniform(
      line, {ProjPoint::finite(0), ProjPoint::finite(1), ProjPoint::infinity()});
  const auto moved = apply_group(mu, Matrix::diagonal({Scalar(1) + 9, 1}));
  std::cout << "prokhorov(g mu, mu) = " << prokhorov(moved, mu) << ", wasserstein = " << wasserstein(moved, mu) << '\n';
}
