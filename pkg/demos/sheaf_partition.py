"""psi and the restriction maps Res_(i + p^n Zp) on a module with constant phi.

Prints psi of a few polynomials, then checks that the restrictions at level 1
and 2 form a partition of unity, and that corrupting the coefficient Frobenius
is detected by the tensor identity.
"""

from pgtrans import scenario
from pgtrans.series import TruncSeries
from pgtrans.sheaf import (corrupted_frobenius, partition_check, psi_module, res_ball, verify_psi_tensor,
                           verify_res_tensor)

if __name__ == "__main__":
    D = scenario.bundled("trivial_0").build()
    X = TruncSeries.gen(D.trunc, "X")
    for text in ("X", "1 + X^2", "X^3"):
        f = TruncSeries.parse(text, D.trunc, "X")
        print("p = 2: psi(%s) = %s" % (text, psi_module(D, [f])[0]))
    for i in range(2):
        print("Res_(%d + 2Zp)(X) = %s" % (i, res_ball(D, [X], i, 1)[0]))

    D12 = scenario.bundled("trivial_0").build(trunc=12)
    for level in (1, 2):
        total, idem, orth = partition_check(D12, level)
        print("level %d: sum = id %s, idempotent %s, orthogonal %s" % (level, total, all(idem), orth))

    E = scenario.bundled("diag_0_2").build()
    print("diag_0_2 (p = 3), k = 2: psi identity %s, Res identity %s"
          % (verify_psi_tensor(E, 2), verify_res_tensor(E, 2, 1, 1)))
    print("  with a corrupted Frobenius on the coefficients: Res identity %s"
          % verify_res_tensor(E, 2, 1, 1, frob=corrupted_frobenius(3)))
