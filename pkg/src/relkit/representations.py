"""The chain of relations and families attached to a selfadjoint contraction.

Starting from a selfadjoint contraction ``T`` on H = M (+) K:

* ``A``       = {((I + T) h, (I - T) h)}, nonnegative selfadjoint;
* ``B_hat``   = component swap of ``A`` on M (maximal accretive, J-selfadjoint);
* ``A_hat``   = rotated swap of ``A`` on M (selfadjoint);
* ``A_breve`` = negated K-side rotated swap of ``A_hat``, equal to ``A^{-1}``;
* ``Q``, ``R`` = the Stieltjes and inverse Stieltjes families built from the
  transfer function of the system with block operator ``T``.

Then ``A`` represents ``R`` (tag ``aarep``), ``B_hat`` represents ``Q``
(``brep``), ``A_hat`` represents ``Q`` (``arep``) and ``A_breve`` represents
``Q`` through ``-Q(1/lam)`` (``opexpr3``).
"""
from dataclasses import dataclass

from .families import OmegaFamily
from .relation import SpaceSplit
from .subspace import DEFAULT_TOL, as_matrix
from .systems import PassiveSystem
from .transforms import j_transform, p_transform, relation_from_contraction

CHAIN_TAGS = {"aarep": ("A", "R"), "brep": ("B_hat", "Q"),
              "arep": ("A_hat", "Q"), "opexpr3": ("A_breve", "Q")}


@dataclass
class RepresentationChain:
    t: object
    system: PassiveSystem
    A: object
    B_hat: object
    A_hat: object
    A_breve: object
    Q: OmegaFamily
    R: OmegaFamily

    def pair(self, tag):
        rel_name, fam_name = CHAIN_TAGS[tag]
        return getattr(self, rel_name), getattr(self, fam_name)


def representation_chain(t, dim_m, tol=DEFAULT_TOL):
    t = as_matrix(t, "t")
    split = SpaceSplit(dim_m, t.shape[0] - dim_m)
    a = relation_from_contraction(t, split, tol)
    b_hat = p_transform(a, tol)
    a_hat = j_transform(p_transform(b_hat, tol), 1j, "m", tol)
    a_breve = j_transform(a_hat, 1j, "k", tol)
    system = PassiveSystem.from_block(t, dim_m, selfadjoint=True)
    return RepresentationChain(
        t=t, system=system, A=a, B_hat=b_hat, A_hat=a_hat, A_breve=a_breve,
        Q=OmegaFamily(system, "formula1"), R=OmegaFamily(system, "formula2"))
