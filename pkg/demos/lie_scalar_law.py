"""Ad_g acting on u+ modulo the central character: which power of det(g) appears?

For each random g in GL2(Q) the two identities hold up to a scalar s(g).
Fitting s(g) = det(g)^e over many g gives a single exponent.
"""

import random
from fractions import Fraction

from pgtrans.suites import random_gl2
from pgtrans.ugl2 import consistent_exponent, verify_adg_formula, verify_lie_lemma

if __name__ == "__main__":
    rng = random.Random(0)
    laws = []
    for _ in range(8):
        g = random_gl2(rng)
        law = verify_lie_lemma(g, Fraction(3, 2))
        laws.append(law)
        laws.append(verify_adg_formula(g, Fraction(3, 2)))
        rows = "[[%s, %s], [%s, %s]]" % tuple(str(x) for row in g.rows() for x in row)
        print("g = %-26s det = %-6s s = %s" % (rows, g.det, law.scalar))
    print("exponent(s) consistent with every instance:", consistent_exponent(laws))
