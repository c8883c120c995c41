"""
Morita invariance of cohomology along a hypercover, computed three ways.

For a hypercover phi: G' -> G and a representation E on G the pipeline
builds the direct complexes C(G, E) and C(G', phi^*E), shifts the dual
F = E*[hi] into nonnegative degrees, forms the semi-direct products of F
and phi^*F, checks that the second is the base change of the first, and
computes H^n(G, E) = H^{n+hi}_lin(G ⋉ F) both through the projectable
subcomplex (lambda) and through the regularity filtration.
"""

from __future__ import annotations

from .cochain import build_complex, pullback_map
from .exactla import RationalMatrix, induced_cohomology_map
from .groupoid import GroupoidMorphism, classify_morphism
from .ruth import RepUpToHomotopy, dual_ruth, pullback_ruth, shift_ruth
from .sdp.bundle import sdp_pullback
from .sdp.filtration import filtration_table
from .sdp.linear import LambdaMap, LinearComplex, projectable_dims


class NotHypercover(ValueError):
    def __init__(self, message, flags):
        super().__init__(message)
        self.flags = flags


class PipelineMismatch(RuntimeError):
    pass


def linear_pullback_matrix(phi: GroupoidMorphism, L: LinearComplex, Lp: LinearComplex, n):
    """c -> c o (phi ⋉ 1) on linear cochains: (alpha, g, a) reads (alpha, phi g, a)."""
    entries = []
    for row, (a, g, t) in enumerate(Lp.bases[n]):
        entries.append((row, L.index[n][(a, phi.on_chain(g), t)], 1))
    return RationalMatrix.from_entries(Lp.dim(n), L.dim(n), entries)


def dual_shift(R: RepUpToHomotopy):
    """E*[hi], concentrated in degrees [0, hi - lo]."""
    return shift_ruth(dual_ruth(R), R.hi)


class MoritaReport:
    def __init__(self, **kw):
        self.__dict__.update(kw)

    @property
    def degrees(self):
        return list(range(self.start, self.cap))

    def row(self, name, side="source"):
        return [self.dims[name][side].get(n, 0) for n in self.degrees]

    @property
    def verdicts(self):
        out = {"hypercover": self.flags["hypercover"],
               "sdp_cartesian": self.cartesian,
               "pullback_commutes": self.dual_shift_commutes,
               "lambda_chain_map": not self.lambda_defects,
               "lambda_onto_projectable": self.lambda_onto_proj,
               "filtration_constant": self.filtration_constant}
        for name in ("direct", "proj", "lin"):
            out[f"{name}_equal"] = self.row(name, "source") == self.row(name, "target")
        out["pipelines_agree"] = all(self.row(a, s) == self.row("direct", s)
                                     for a in ("proj", "lin") for s in ("source", "target"))
        out["direct_bijective"] = all(self.direct_bijective.values())
        out["lin_bijective"] = all(self.lin_bijective.values())
        return out

    @property
    def passed(self):
        return all(self.verdicts.values())


def morita_pipeline(phi: GroupoidMorphism, R: RepUpToHomotopy, cap=4, start=None, filtration_ms=None):
    """Dims of H^n(G, E) and H^n(G', phi^*E) for start <= n <= cap-1 by the
    direct, projectable and filtration pipelines; the induced maps on
    cohomology; and the structural checks along the way."""
    flags = classify_morphism(phi)
    if not flags.get("hypercover"):
        raise NotHypercover("the morphism is not a hypercover", flags)
    if R.base is not phi.target:
        raise ValueError("the representation lives over a different groupoid")
    start = -R.hi if start is None else start
    Rp = pullback_ruth(phi, R)

    # direct C(G, E) -> C(G', phi^*E)
    pb = pullback_map(phi, R, cap, Rp=Rp)
    direct_bij = {n: pb.maps[n].bijective and pb.maps[n].bijective_by_ranks for n in sorted(pb.maps)}

    # linear cochains on the semi-direct products of F = E*[hi]
    F = dual_shift(R)
    Fp = pullback_ruth(phi, F)
    commutes = Fp.same_data(dual_shift(Rp))
    lcap = cap + R.hi
    sp = sdp_pullback(phi, F, lcap, Rp=Fp)
    L, Lp = LinearComplex(sp.target, lcap), LinearComplex(sp.source, lcap)

    # lambda: C(G, F*) -> C_proj and its image
    lam, lamp = LambdaMap(L), LambdaMap(Lp)
    defects = lam.chain_map_defects() + lamp.chain_map_defects()
    proj, projp = projectable_dims(L), projectable_dims(Lp)
    lam_dims, lamp_dims = lam.P.cohomology_dims(start=0), lamp.P.cohomology_dims(start=0)
    onto = proj == lam_dims and projp == lamp_dims

    # the filtration by regularity, and the full linear complex
    ms = list(range(0, min(lcap, 4))) if filtration_ms is None else list(filtration_ms)
    table, tablep = filtration_table(L, ms), filtration_table(Lp, ms)
    constant = all(table[m] == table[ms[0]] for m in ms) and all(tablep[m] == tablep[ms[0]] for m in ms)
    lin, linp = L.cohomology_dims(), Lp.cohomology_dims()

    Fm = {n: linear_pullback_matrix(phi, L, Lp, n) for n in range(0, lcap + 1)}
    lin_bij = {}
    for n in range(0, lcap):
        Dp = L.differential(n - 1)
        Dpp = Lp.differential(n - 1)
        m = induced_cohomology_map(Dp, L.differential(n), Dpp, Lp.differential(n), Fm[n],
                                   F_prev=Fm[n - 1] if n > 0 else None, F_next=Fm[n + 1])
        lin_bij[n - R.hi] = m.bijective and m.bijective_by_ranks

    def shifted(d):
        return {n - R.hi: v for n, v in d.items()}

    dims = {
        "direct": {"source": pb.dims_source, "target": pb.dims_target},
        "proj": {"source": shifted(proj), "target": shifted(projp)},
        "lin": {"source": shifted(lin), "target": shifted(linp)},
    }
    return MoritaReport(phi=phi, rep=R, cap=cap, start=start, flags=flags, dims=dims,
                        direct_bijective=direct_bij, lin_bijective=lin_bij,
                        cartesian=sp.cartesian, dual_shift_commutes=commutes,
                        lambda_defects=defects, lambda_onto_proj=onto,
                        filtration={"source": table, "target": tablep},
                        filtration_constant=constant, linear_cap=lcap, direct=pb)
