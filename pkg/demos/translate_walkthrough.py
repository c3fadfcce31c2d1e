"""Translate a rank-two diagonal model by V_1, V_2, V_3 and watch the Casimir split it.

For nabla = diag(0, alpha) the pieces sit at c = (alpha+k-2i)^2 - 1 and piece i
carries Sen weights {i, alpha+k-i}.  The nilpotent model shows what breaks when
the connection is not semisimple.
"""

from fractions import Fraction

from pgtrans import scenario
from pgtrans.translate import TranslatedModule, spectral_decomposition


def show(D, k):
    rep = spectral_decomposition(TranslatedModule(D, k))
    print(rep.table())
    print()


if __name__ == "__main__":
    diag = scenario.bundled("diag_0_3half").build()
    print("alpha = %s, so for k = 1 we expect c in {%s, %s}\n"
          % (diag.alpha, (diag.alpha + 1) ** 2 - 1, (diag.alpha - 1) ** 2 - 1))
    for k in (1, 2, 3):
        show(diag, k)

    print("Nilpotent connection, k = 1: a single generalized eigenvalue, and c is not semisimple.\n")
    show(scenario.bundled("nilpotent").build(), 1)

    print("Zero connection, k = 2: the top piece splits as D + t^2 D.\n")
    rep = spectral_decomposition(TranslatedModule(scenario.bundled("zero").build(), 2))
    print("piece at c = 3:", rep.piece(Fraction(3)).structure)
